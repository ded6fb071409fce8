#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sls/top_k.hpp"

namespace sls {

inline constexpr int kTraceFormatVersion = 1;
inline constexpr const char* kTraceExtension = ".slstrace.jsonl";

struct TraceHeader {
    int format_version = kTraceFormatVersion;
    std::size_t vocab_size = 0;
    std::size_t k = 0;
    std::string source_label;
    std::uint64_t seed = 0;

    bool operator==(const TraceHeader&) const = default;
};

// Values live in 32-bit precision on disk; in memory they are the widened
// doubles of those floats.
struct TraceRecord {
    std::uint64_t step = 0;
    std::vector<TokenId> indices;
    std::vector<double> values;
    std::optional<TokenId> chosen_token;

    TopKSlice slice() const { return TopKSlice{values, indices, step}; }
    bool operator==(const TraceRecord&) const = default;
};

struct Trace {
    TraceHeader header;
    std::vector<TraceRecord> records;
};

void validate_header(const TraceHeader& header);
void validate_record(const TraceHeader& header, const TraceRecord& record);

// Line-delimited JSON, header first. Floats are written as the shortest
// decimal that round-trips the 32-bit value.
void write_trace(std::ostream& out, const TraceHeader& header, const std::vector<TraceRecord>& records);
void write_trace(const std::filesystem::path& path, const TraceHeader& header,
                 const std::vector<TraceRecord>& records);

Trace read_trace(std::istream& in);
Trace read_trace(const std::filesystem::path& path);

// Rounds each value to float and back, i.e. the precision a trace stores.
std::vector<double> quantize_f32(std::span<const double> values);

} // namespace sls
