#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sls/spectral.hpp"

namespace sls {

// FIFO of the last <= capacity top-K value vectors, oldest first. Backed by a
// fixed ring so pushes never reallocate.
class SlidingLogitBuffer {
  public:
    SlidingLogitBuffer(std::size_t capacity, std::size_t width);

    // Appends a row, evicting the oldest when full. Throws InputError on a
    // width mismatch.
    void push(std::span<const double> row);

    // Replaces the most recent row. Throws InputError if empty or on a
    // width mismatch.
    void overwrite_newest(std::span<const double> row);

    void clear() noexcept;

    std::size_t size() const noexcept { return size_; }
    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t width() const noexcept { return width_; }
    bool empty() const noexcept { return size_ == 0; }

    // i = 0 is the oldest stored row.
    std::span<const double> row(std::size_t i) const;
    std::span<const double> newest() const;

    std::vector<std::vector<double>> rows() const;
    RowMatrix matrix() const;

  private:
    std::size_t slot(std::size_t i) const noexcept { return (head_ + i) % capacity_; }

    std::size_t capacity_;
    std::size_t width_;
    std::size_t head_ = 0;
    std::size_t size_ = 0;
    std::vector<double> storage_;
};

} // namespace sls
