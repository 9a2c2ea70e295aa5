#include "topoprune/text_io.hpp"

#include <charconv>
#include <cmath>

#include "topoprune/errors.hpp"

namespace topoprune {

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    std::string text(buf, res.ptr);
    if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
    return text;
}

double parse_double(std::string_view text, const std::string& context) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end || text.empty()) {
        throw validation_error("non-numeric value '" + std::string(text) + "' at " + context);
    }
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::string record = line;
    if (!record.empty() && record.back() == '\r') record.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = record.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(record.substr(start));
            break;
        }
        fields.push_back(record.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t hash = seed;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string to_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

} // namespace topoprune
