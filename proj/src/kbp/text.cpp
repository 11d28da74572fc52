#include "kbp/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cstdint>

namespace kbp::text {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      n = 0;
      U8_APPEND_UNSAFE(buf, n, 0xFFFD);
    }
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

namespace {

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

std::u32string_view trim_view(std::u32string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::u32string lower32(std::u32string_view s) {
  std::u32string out(s);
  for (auto& c : out) c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
  return out;
}

bool is_punct_or_symbol(char32_t c) {
  const auto cp = static_cast<UChar32>(c);
  if (u_ispunct(cp)) return true;
  switch (u_charType(cp)) {
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string trim(std::string_view s) { return encode_utf8(trim_view(decode_utf8(s))); }

std::string lowercase(std::string_view s) { return encode_utf8(lower32(decode_utf8(s))); }

std::string canonical(std::string_view s) {
  return encode_utf8(lower32(trim_view(decode_utf8(s))));
}

bool equals_canonical(std::string_view a, std::string_view b) { return canonical(a) == canonical(b); }

bool is_alnum(char32_t c) { return u_isalnum(static_cast<UChar32>(c)); }

bool is_punctuation_only(std::string_view s) {
  const auto cps = decode_utf8(s);
  return std::all_of(cps.begin(), cps.end(), [](char32_t c) { return is_space(c) || is_punct_or_symbol(c); });
}

std::vector<Span> find_mentions(std::string_view haystack, std::string_view needle) {
  std::vector<Span> spans;
  const auto pattern = lower32(trim_view(decode_utf8(needle)));
  if (pattern.empty()) return spans;
  // Simple case mapping is 1:1 on code points, so offsets carry over.
  const auto hay = lower32(decode_utf8(haystack));
  std::size_t pos = hay.find(pattern);
  while (pos != std::u32string::npos) {
    const std::size_t end = pos + pattern.size();
    const bool left_ok = pos == 0 || !is_alnum(hay[pos - 1]);
    const bool right_ok = end == hay.size() || !is_alnum(hay[end]);
    if (left_ok && right_ok) spans.push_back({pos, end});
    pos = hay.find(pattern, pos + 1);
  }
  return spans;
}

bool mentions(std::string_view haystack, std::string_view needle) {
  return !find_mentions(haystack, needle).empty();
}

std::size_t codepoint_length(std::string_view s) { return decode_utf8(s).size(); }

std::string substr_codepoints(std::string_view s, std::size_t start, std::size_t end) {
  const auto cps = decode_utf8(s);
  start = std::min(start, cps.size());
  end = std::clamp(end, start, cps.size());
  return encode_utf8(std::u32string_view(cps).substr(start, end - start));
}

std::vector<Token> whitespace_tokens(std::string_view s) {
  std::vector<Token> tokens;
  const auto cps = decode_utf8(s);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i])) ++i;
    if (i == cps.size()) break;
    const std::size_t start = i;
    while (i < cps.size() && !is_space(cps[i])) ++i;
    tokens.push_back({encode_utf8(std::u32string_view(cps).substr(start, i - start)), {start, i}});
  }
  return tokens;
}

}  // namespace kbp::text
