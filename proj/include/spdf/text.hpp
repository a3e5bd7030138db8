#pragma once

#include <string>
#include <string_view>

namespace spdf::text {

// Strict UTF-8 validation (rejects overlongs, surrogates, > U+10FFFF).
bool is_valid_utf8(std::string_view s);

// Decodes valid UTF-8; throws Error(Parse) on malformed input.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

// Simple lowercase mapping for ASCII, Latin-1 and Latin Extended-A.
char32_t to_lower(char32_t c);

// Maps accented Latin letters onto their base letter ("č" -> "c").
char32_t strip_diacritic(char32_t c);

// Lowercases and collapses runs of whitespace into single spaces, trimming both ends.
std::u32string case_fold(std::u32string_view s);

std::string ascii_lower(std::string_view s);

}  // namespace spdf::text
