#include "sls/sliding_buffer.hpp"

#include <algorithm>
#include <string>

#include "sls/error.hpp"

namespace sls {

SlidingLogitBuffer::SlidingLogitBuffer(std::size_t capacity, std::size_t width)
    : capacity_(capacity), width_(width), storage_(capacity * width) {
    if (capacity == 0 || width == 0) {
        throw ConfigError("sliding buffer needs positive capacity and width");
    }
}

void SlidingLogitBuffer::push(std::span<const double> row) {
    if (row.size() != width_) {
        throw InputError("buffer row has length " + std::to_string(row.size()) + ", expected " +
                         std::to_string(width_));
    }
    std::size_t dst;
    if (size_ < capacity_) {
        dst = slot(size_);
        ++size_;
    } else {
        dst = head_;
        head_ = (head_ + 1) % capacity_;
    }
    std::copy(row.begin(), row.end(), storage_.begin() + static_cast<std::ptrdiff_t>(dst * width_));
}

void SlidingLogitBuffer::overwrite_newest(std::span<const double> row) {
    if (size_ == 0) {
        throw InputError("overwrite on an empty buffer");
    }
    if (row.size() != width_) {
        throw InputError("buffer row has length " + std::to_string(row.size()) + ", expected " +
                         std::to_string(width_));
    }
    const std::size_t dst = slot(size_ - 1);
    std::copy(row.begin(), row.end(), storage_.begin() + static_cast<std::ptrdiff_t>(dst * width_));
}

void SlidingLogitBuffer::clear() noexcept {
    head_ = 0;
    size_ = 0;
}

std::span<const double> SlidingLogitBuffer::row(std::size_t i) const {
    if (i >= size_) {
        throw InputError("buffer row " + std::to_string(i) + " out of range");
    }
    return {storage_.data() + slot(i) * width_, width_};
}

std::span<const double> SlidingLogitBuffer::newest() const {
    if (size_ == 0) {
        throw InputError("newest row of an empty buffer");
    }
    return row(size_ - 1);
}

std::vector<std::vector<double>> SlidingLogitBuffer::rows() const {
    std::vector<std::vector<double>> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) {
        const auto r = row(i);
        out.emplace_back(r.begin(), r.end());
    }
    return out;
}

RowMatrix SlidingLogitBuffer::matrix() const {
    RowMatrix m(static_cast<Eigen::Index>(size_), static_cast<Eigen::Index>(width_));
    for (std::size_t i = 0; i < size_; ++i) {
        const auto r = row(i);
        std::copy(r.begin(), r.end(), m.row(static_cast<Eigen::Index>(i)).data());
    }
    return m;
}

} // namespace sls
