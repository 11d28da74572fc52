#pragma once

// Canonical string handling shared by every matching rule in the toolkit:
// trim Unicode whitespace, lowercase code point by code point. Offsets
// exposed here are Unicode code point indices unless stated otherwise.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kbp::text {

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

std::string trim(std::string_view s);
std::string lowercase(std::string_view s);

/// trim + lowercase. Two strings "match" iff their canonical forms are equal.
std::string canonical(std::string_view s);

bool equals_canonical(std::string_view a, std::string_view b);

bool is_alnum(char32_t c);

/// True when every code point is punctuation, a symbol or whitespace
/// (also true for the empty string).
bool is_punctuation_only(std::string_view s);

struct Span {
  std::size_t start = 0;  // code points, inclusive
  std::size_t end = 0;    // code points, exclusive
  bool operator==(const Span&) const = default;
};

/// All case-insensitive occurrences of canonical(needle) in haystack that sit
/// on word boundaries: the code points immediately before and after the match
/// are not alphanumeric. Offsets refer to the haystack as given.
std::vector<Span> find_mentions(std::string_view haystack, std::string_view needle);

bool mentions(std::string_view haystack, std::string_view needle);

std::size_t codepoint_length(std::string_view s);

/// Substring by code point range [start, end).
std::string substr_codepoints(std::string_view s, std::size_t start, std::size_t end);

/// Whitespace tokens of s, each with its code point span.
struct Token {
  std::string text;
  Span span;
};
std::vector<Token> whitespace_tokens(std::string_view s);

}  // namespace kbp::text
