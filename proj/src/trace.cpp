#include "sls/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "sls/error.hpp"

namespace sls {

namespace {

using nlohmann::json;

// DOM builder that rounds every floating literal straight from its decimal
// text to float, avoiding decimal -> double -> float double rounding.
class Float32DomParser : public nlohmann::detail::json_sax_dom_parser<json> {
    using Base = nlohmann::detail::json_sax_dom_parser<json>;

  public:
    using Base::Base;

    bool number_float(double /*unused*/, const std::string& raw) {
        float f = 0.0f;
        const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), f);
        if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
            throw InputError("number " + raw + " is not representable as a 32-bit float");
        }
        return Base::number_float(static_cast<double>(f), raw);
    }
};

json parse_line(const std::string& line, std::size_t line_no) {
    json out;
    Float32DomParser handler(out, true);
    try {
        json::sax_parse(line, &handler);
    } catch (const json::exception& e) {
        throw ParseError(line_no, e.what());
    } catch (const InputError& e) {
        throw ParseError(line_no, e.what());
    }
    if (!out.is_object()) {
        throw ParseError(line_no, "expected a JSON object");
    }
    return out;
}

const json& field(const json& obj, const char* key, std::size_t line_no) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(line_no, std::string("missing field \"") + key + "\"");
    }
    return *it;
}

std::uint64_t as_unsigned(const json& v, const char* key, std::size_t line_no) {
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ParseError(line_no, std::string("field \"") + key + "\" must be a non-negative integer");
}

TokenId as_token(const json& v, const char* key, std::size_t line_no) {
    if (!v.is_number_integer()) {
        throw ParseError(line_no, std::string("field \"") + key + "\" must hold integers");
    }
    const auto x = v.get<std::int64_t>();
    if (x < 0 || x > std::numeric_limits<TokenId>::max()) {
        throw ParseError(line_no, std::string("token id out of range in \"") + key + "\"");
    }
    return static_cast<TokenId>(x);
}

void append_float(std::string& out, double value) {
    const float f = static_cast<float>(value);
    if (f == 0.0f && std::signbit(f)) {
        out += "-0.0";
        return;
    }
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), f);
    if (ec != std::errc{}) {
        throw NumericalError("cannot format value " + std::to_string(value));
    }
    out.append(buf, ptr);
}

std::string header_line(const TraceHeader& h) {
    std::string s = "{\"format_version\":" + std::to_string(h.format_version) +
                    ",\"vocab_size\":" + std::to_string(h.vocab_size) + ",\"k\":" + std::to_string(h.k) +
                    ",\"source_label\":" + json(h.source_label).dump() + ",\"seed\":" + std::to_string(h.seed) + "}";
    return s;
}

std::string record_line(const TraceRecord& r) {
    std::string s = "{\"step\":" + std::to_string(r.step) + ",\"indices\":[";
    for (std::size_t i = 0; i < r.indices.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(r.indices[i]);
    }
    s += "],\"values\":[";
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        if (i) s += ',';
        append_float(s, r.values[i]);
    }
    s += "],\"chosen_token\":";
    s += r.chosen_token ? std::to_string(*r.chosen_token) : std::string("null");
    s += '}';
    return s;
}

TraceHeader parse_header(const json& j, std::size_t line_no) {
    TraceHeader h;
    const auto& version = field(j, "format_version", line_no);
    if (!version.is_number_integer()) {
        throw ParseError(line_no, "format_version must be an integer");
    }
    h.format_version = static_cast<int>(version.get<std::int64_t>());
    h.vocab_size = static_cast<std::size_t>(as_unsigned(field(j, "vocab_size", line_no), "vocab_size", line_no));
    h.k = static_cast<std::size_t>(as_unsigned(field(j, "k", line_no), "k", line_no));
    const auto& label = field(j, "source_label", line_no);
    if (!label.is_string()) {
        throw ParseError(line_no, "source_label must be a string");
    }
    h.source_label = label.get<std::string>();
    h.seed = as_unsigned(field(j, "seed", line_no), "seed", line_no);
    return h;
}

TraceRecord parse_record(const json& j, std::size_t line_no) {
    TraceRecord r;
    r.step = as_unsigned(field(j, "step", line_no), "step", line_no);
    const auto& indices = field(j, "indices", line_no);
    const auto& values = field(j, "values", line_no);
    if (!indices.is_array() || !values.is_array()) {
        throw ParseError(line_no, "indices and values must be arrays");
    }
    r.indices.reserve(indices.size());
    for (const auto& v : indices) {
        r.indices.push_back(as_token(v, "indices", line_no));
    }
    r.values.reserve(values.size());
    for (const auto& v : values) {
        if (!v.is_number()) {
            throw ParseError(line_no, "values must be numbers");
        }
        r.values.push_back(static_cast<double>(static_cast<float>(v.get<double>())));
    }
    const auto& chosen = field(j, "chosen_token", line_no);
    if (!chosen.is_null()) {
        r.chosen_token = as_token(chosen, "chosen_token", line_no);
    }
    return r;
}

} // namespace

void validate_header(const TraceHeader& h) {
    if (h.format_version != kTraceFormatVersion) {
        throw ValidationError("unsupported trace format version " + std::to_string(h.format_version));
    }
    if (h.vocab_size == 0 || h.k == 0) {
        throw ValidationError("trace vocab_size and k must be positive");
    }
    if (h.k > h.vocab_size) {
        throw ValidationError("trace k " + std::to_string(h.k) + " exceeds vocab_size " + std::to_string(h.vocab_size));
    }
}

void validate_record(const TraceHeader& h, const TraceRecord& r) {
    const std::string where = "record at step " + std::to_string(r.step);
    if (r.indices.size() != h.k || r.values.size() != h.k) {
        throw ValidationError(where + " has " + std::to_string(r.indices.size()) + " indices and " +
                              std::to_string(r.values.size()) + " values, expected k=" + std::to_string(h.k));
    }
    try {
        check_slice(r.slice(), h.vocab_size);
    } catch (const InputError& e) {
        throw ValidationError(e.what());
    }
    for (std::size_t i = 1; i < r.values.size(); ++i) {
        if (r.values[i] > r.values[i - 1]) {
            throw ValidationError(where + " values are not sorted non-increasing");
        }
    }
    if (r.chosen_token && (*r.chosen_token < 0 || static_cast<std::size_t>(*r.chosen_token) >= h.vocab_size)) {
        throw ValidationError(where + " chosen_token outside vocabulary");
    }
}

std::vector<double> quantize_f32(std::span<const double> values) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [](double v) { return static_cast<double>(static_cast<float>(v)); });
    return out;
}

void write_trace(std::ostream& out, const TraceHeader& header, const std::vector<TraceRecord>& records) {
    validate_header(header);
    for (std::size_t i = 0; i < records.size(); ++i) {
        validate_record(header, records[i]);
        if (i > 0 && records[i].step <= records[i - 1].step) {
            throw ValidationError("record at step " + std::to_string(records[i].step) + " is out of step order");
        }
    }
    out << header_line(header) << '\n';
    for (const auto& r : records) {
        out << record_line(r) << '\n';
    }
    out.flush();
}

void write_trace(const std::filesystem::path& path, const TraceHeader& header,
                 const std::vector<TraceRecord>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open trace for writing: " + path.string());
    }
    write_trace(out, header, records);
    if (!out) {
        throw IoError("failed writing trace: " + path.string());
    }
}

Trace read_trace(std::istream& in) {
    Trace trace;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const json j = parse_line(line, line_no);
        if (!have_header) {
            trace.header = parse_header(j, line_no);
            validate_header(trace.header);
            have_header = true;
            continue;
        }
        auto record = parse_record(j, line_no);
        try {
            validate_record(trace.header, record);
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!trace.records.empty() && record.step <= trace.records.back().step) {
            throw ValidationError("line " + std::to_string(line_no) + ": step " + std::to_string(record.step) +
                                  " is out of order");
        }
        trace.records.push_back(std::move(record));
    }
    if (!have_header) {
        throw ParseError(1, "trace has no header line");
    }
    return trace;
}

Trace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open trace: " + path.string());
    }
    return read_trace(in);
}

} // namespace sls
