#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace topoprune {

// Shortest round-trip decimal form. Integral values keep a trailing ".0"
// ("1.0", not "1") so numeric CSV columns stay visibly floating-point;
// infinities print as "inf"/"-inf". from_chars recovers the exact bits.
std::string format_double(double value);

// Strict full-token parse; throws validation_error with `context` on failure.
double parse_double(std::string_view text, const std::string& context);

// Splits one CSV record on ','. No quoting: the file formats forbid embedded
// delimiters. A trailing '\r' (CRLF input) is stripped first.
std::vector<std::string> split_csv_line(const std::string& line);

// FNV-1a, used for output config digests.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ull);

std::string to_hex(std::uint64_t value);

} // namespace topoprune
