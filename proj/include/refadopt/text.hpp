#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace refadopt {

// Lenient UTF-8 decoding: a byte that does not start a valid sequence is taken
// as its own scalar (Latin-1 fallback), so decoding never fails and every byte
// is accounted for.
std::u32string decode_utf8(std::string_view text);

// The scalar starting at byte `pos` and the number of bytes it occupies.
std::pair<char32_t, std::size_t> decode_scalar(std::string_view text, std::size_t pos);

std::string encode_utf8(char32_t cp);

// Byte offsets of the start of each scalar, plus a final entry at text.size().
std::vector<std::size_t> scalar_offsets(std::string_view text);

// CRLF -> LF. Lone '\r' is left alone.
std::string normalize_newlines(std::string_view text);

std::string to_lower_ascii(std::string_view text);

std::vector<std::string> split_lines(std::string_view text);

}  // namespace refadopt
