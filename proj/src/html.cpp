#include <algorithm>
#include <iterator>
#include <string>

#include "antiplag/textmodel.hpp"
#include "antiplag/unicode.hpp"

namespace antiplag {

namespace {

constexpr std::u32string_view kBlockTags[] = {
    U"address", U"article", U"aside",  U"blockquote", U"body",   U"br",
    U"caption", U"dd",      U"div",    U"dl",         U"dt",     U"fieldset",
    U"figcaption", U"figure", U"footer", U"form",     U"h1",     U"h2",
    U"h3",      U"h4",      U"h5",     U"h6",         U"head",   U"header",
    U"hr",      U"html",    U"li",     U"main",       U"nav",    U"ol",
    U"option",  U"p",       U"pre",    U"section",    U"table",  U"tbody",
    U"td",      U"tfoot",   U"th",     U"thead",      U"title",  U"tr",
    U"ul",      U"img"};

bool is_ascii_alpha(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

bool is_block_tag(std::u32string_view name) {
  return std::find(std::begin(kBlockTags), std::end(kBlockTags), name) !=
         std::end(kBlockTags);
}

bool starts_with_folded(std::u32string_view text, std::size_t pos,
                        std::u32string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (fold_case(text[pos + k]) != prefix[k]) return false;
  }
  return true;
}

// Index just past the '>' closing the tag that opens at `pos`, skipping quoted
// attribute values. Unterminated tags run to the end of input.
std::size_t skip_tag(std::u32string_view html, std::size_t pos) {
  char32_t quote = 0;
  for (std::size_t i = pos + 1; i < html.size(); ++i) {
    const char32_t c = html[i];
    if (quote != 0) {
      if (c == quote) quote = 0;
    } else if (c == U'"' || c == U'\'') {
      quote = c;
    } else if (c == U'>') {
      return i + 1;
    }
  }
  return html.size();
}

std::size_t find_folded(std::u32string_view text, std::size_t pos,
                        std::u32string_view needle) {
  for (std::size_t i = pos; i + needle.size() <= text.size(); ++i) {
    if (starts_with_folded(text, i, needle)) return i;
  }
  return std::u32string_view::npos;
}

// Decodes the entity at `pos` (which holds '&'). Returns the decoded
// character and the number of input characters consumed, or {0, 0}.
std::pair<char32_t, std::size_t> decode_entity(std::u32string_view html,
                                               std::size_t pos) {
  const std::size_t semi = html.find(U';', pos);
  if (semi == std::u32string_view::npos || semi - pos > 10) return {0, 0};
  const std::u32string_view body = html.substr(pos + 1, semi - pos - 1);
  const std::size_t consumed = semi - pos + 1;
  if (body == U"amp") return {U'&', consumed};
  if (body == U"lt") return {U'<', consumed};
  if (body == U"gt") return {U'>', consumed};
  if (body == U"quot") return {U'"', consumed};
  if (body == U"apos") return {U'\'', consumed};
  if (body == U"nbsp") return {0xA0, consumed};
  if (body.size() >= 2 && body[0] == U'#') {
    char32_t value = 0;
    const bool hex = body[1] == U'x' || body[1] == U'X';
    const std::size_t first = hex ? 2 : 1;
    if (first == body.size()) return {0, 0};
    for (std::size_t k = first; k < body.size(); ++k) {
      const char32_t c = fold_case(body[k]);
      int digit = -1;
      if (c >= U'0' && c <= U'9') digit = static_cast<int>(c - U'0');
      if (hex && c >= U'a' && c <= U'f') digit = static_cast<int>(c - U'a' + 10);
      if (digit < 0 || (!hex && digit > 9)) return {0, 0};
      value = value * (hex ? 16 : 10) + static_cast<char32_t>(digit);
      if (value > 0x10FFFF) return {kReplacementChar, consumed};
    }
    if (value == 0 || (value >= 0xD800 && value <= 0xDFFF)) {
      return {kReplacementChar, consumed};
    }
    return {value, consumed};
  }
  return {0, 0};
}

}  // namespace

std::u32string strip_html(std::u32string_view html) {
  std::u32string out;
  out.reserve(html.size());
  std::size_t i = 0;
  while (i < html.size()) {
    const char32_t c = html[i];
    if (c == U'<') {
      if (starts_with_folded(html, i, U"<!--")) {
        const std::size_t close = html.find(U"-->", i + 4);
        i = close == std::u32string_view::npos ? html.size() : close + 3;
        out.push_back(U' ');
        continue;
      }
      const bool closing = i + 1 < html.size() && html[i + 1] == U'/';
      const std::size_t name_start = i + (closing ? 2 : 1);
      const bool markup = name_start < html.size() &&
                          (is_ascii_alpha(html[name_start]) ||
                           html[name_start] == U'!' || html[name_start] == U'?');
      if (!markup) {
        // Stray angle bracket; never let it through as text.
        out.push_back(U' ');
        ++i;
        continue;
      }
      std::size_t name_end = name_start;
      while (name_end < html.size() &&
             (is_ascii_alpha(html[name_end]) ||
              (html[name_end] >= U'0' && html[name_end] <= U'9'))) {
        ++name_end;
      }
      const std::u32string name =
          fold_case(html.substr(name_start, name_end - name_start));
      i = skip_tag(html, i);
      if (!closing && (name == U"script" || name == U"style")) {
        const std::u32string terminator = U"</" + name;
        const std::size_t close = find_folded(html, i, terminator);
        i = close == std::u32string_view::npos ? html.size()
                                               : skip_tag(html, close);
        out.push_back(U' ');
        continue;
      }
      if (is_block_tag(name)) out.push_back(U' ');
      continue;
    }
    if (c == U'>') {
      out.push_back(U' ');
      ++i;
      continue;
    }
    if (c == U'&') {
      const auto [decoded, consumed] = decode_entity(html, i);
      if (consumed > 0) {
        out.push_back(decoded);
        i += consumed;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

}  // namespace antiplag
