#pragma once

#include <string>
#include <string_view>

namespace antiplag {

inline constexpr char32_t kReplacementChar = U'\uFFFD';

/// Decodes UTF-8, replacing each ill-formed subsequence with U+FFFD.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view text);

bool is_space(char32_t c);

/// Simple one-to-one case fold (ASCII, Latin-1, Greek, Cyrillic). Never
/// changes string length, so folded text shares offsets with the original.
char32_t fold_case(char32_t c);
std::u32string fold_case(std::u32string_view text);

inline bool same_folded(char32_t a, char32_t b) {
  return a == b || fold_case(a) == fold_case(b);
}

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace antiplag
