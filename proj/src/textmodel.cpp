#include "antiplag/textmodel.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "antiplag/errors.hpp"
#include "antiplag/unicode.hpp"

namespace antiplag {

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::Suspect:
      return "suspect";
    case Origin::LocalCorpus:
      return "corpus";
    case Origin::SampledWeb:
      return "sampled";
  }
  return "unknown";
}

std::string Document::utf8_text() const { return encode_utf8(text); }

std::u32string normalize_text(std::u32string_view text) {
  if (!text.empty() && text.front() == 0xFEFF) text.remove_prefix(1);
  std::u32string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<Token> tokenize(std::u32string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(text[i])) ++i;
    if (i == n) break;
    const std::size_t start = i;
    while (i < n && !is_space(text[i])) ++i;
    tokens.push_back(Token{std::u32string(text.substr(start, i - start)),
                           start, i});
  }
  return tokens;
}

namespace {

Document make_document(std::u32string decoded, std::string_view raw,
                       std::string id, Origin origin, std::string uri) {
  Document doc;
  doc.id = std::move(id);
  doc.origin = origin;
  doc.source_uri = std::move(uri);
  doc.raw_bytes_hash = sha256_hex(raw);
  doc.text = normalize_text(decoded);
  if (doc.text.empty()) {
    throw EmptyDocument("document '" + doc.id + "' is empty after normalization");
  }
  doc.tokens = tokenize(doc.text);
  return doc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Document ingest_plain_text(std::string_view bytes, std::string id,
                           Origin origin, std::string source_uri) {
  return make_document(decode_utf8(bytes), bytes, std::move(id), origin,
                       std::move(source_uri));
}

Document ingest_html(std::string_view bytes, std::string id, Origin origin,
                     std::string source_uri) {
  return make_document(strip_html(decode_utf8(bytes)), bytes, std::move(id),
                       origin, std::move(source_uri));
}

Document ingest_file(const std::string& path, Origin origin,
                     std::optional<std::string> id) {
  const std::filesystem::path p(path);
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  const std::string bytes = read_file(path);
  std::string doc_id = id ? *id : p.stem().string();
  if (ext == ".html" || ext == ".htm") {
    return ingest_html(bytes, std::move(doc_id), origin, path);
  }
  return ingest_plain_text(bytes, std::move(doc_id), origin, path);
}

std::optional<std::size_t> char_to_token(const Document& doc,
                                         std::size_t offset) {
  if (offset > doc.text.size()) {
    throw OffsetOutOfRange("offset " + std::to_string(offset) +
                           " beyond text length " +
                           std::to_string(doc.text.size()));
  }
  // First token whose end is past the offset.
  auto it = std::upper_bound(
      doc.tokens.begin(), doc.tokens.end(), offset,
      [](std::size_t value, const Token& t) { return value < t.end; });
  if (it == doc.tokens.end() || it->start > offset) return std::nullopt;
  return static_cast<std::size_t>(it - doc.tokens.begin());
}

}  // namespace antiplag
