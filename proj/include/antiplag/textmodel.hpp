#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace antiplag {

enum class Origin { Suspect, LocalCorpus, SampledWeb };

std::string_view to_string(Origin origin);

/// Half-open character range into a document's normalized text.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool empty() const { return end <= start; }
  bool contains(const CharSpan& other) const {
    return start <= other.start && other.end <= end;
  }
  bool overlaps(const CharSpan& other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
  friend auto operator<=>(const CharSpan&, const CharSpan&) = default;
};

struct Token {
  std::u32string surface;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Normalized text of a suspect, corpus or sampled source, with its tokens.
/// Offsets count Unicode code points. Immutable once built.
struct Document {
  std::string id;
  Origin origin = Origin::Suspect;
  std::string source_uri;
  std::string raw_bytes_hash;
  std::u32string text;
  std::vector<Token> tokens;

  std::size_t length() const { return text.size(); }
  std::u32string_view slice(CharSpan span) const {
    return std::u32string_view(text).substr(span.start, span.length());
  }
  std::string utf8_text() const;
};

/// Collapses whitespace runs to one space, strips both ends, drops CRs and a
/// leading byte-order mark.
std::u32string normalize_text(std::u32string_view text);

/// Whitespace split; punctuation stays attached to its word.
std::vector<Token> tokenize(std::u32string_view text);

Document ingest_plain_text(std::string_view bytes, std::string id,
                           Origin origin = Origin::Suspect,
                           std::string source_uri = {});

Document ingest_html(std::string_view bytes, std::string id,
                     Origin origin = Origin::Suspect,
                     std::string source_uri = {});

/// Tag stripper used by ingest_html. Output is not yet normalized.
std::u32string strip_html(std::u32string_view html);

/// Picks ingest_html for .html/.htm files and ingest_plain_text otherwise.
/// The id defaults to the file stem.
Document ingest_file(const std::string& path, Origin origin,
                     std::optional<std::string> id = std::nullopt);

/// Index of the token containing `offset`, or nullopt when the offset falls
/// on whitespace or at the end of the text.
std::optional<std::size_t> char_to_token(const Document& doc,
                                         std::size_t offset);

}  // namespace antiplag
