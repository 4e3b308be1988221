#include <algorithm>
#include <limits>

#include "antiplag/errors.hpp"
#include "antiplag/searchindex.hpp"
#include "antiplag/unicode.hpp"

namespace antiplag {

bool hit_less(const SearchHit& a, const SearchHit& b) {
  if (a.source_id != b.source_id) return a.source_id < b.source_id;
  const std::size_t sa = a.span ? a.span->start : 0;
  const std::size_t sb = b.span ? b.span->start : 0;
  if (a.span.has_value() != b.span.has_value()) return !a.span.has_value();
  return sa < sb;
}

PhraseIndex::PhraseIndex(std::vector<DocumentPtr> corpus,
                         std::size_t gram_width)
    : corpus_(std::move(corpus)), gram_width_(gram_width) {
  if (gram_width_ == 0) throw ConfigError("gram width must be >= 1");
  if (corpus_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("corpus too large for index");
  }
  doc_terms_.reserve(corpus_.size());
  for (const DocumentPtr& doc : corpus_) {
    std::vector<TermId> ids;
    ids.reserve(doc->tokens.size());
    for (const Token& token : doc->tokens) {
      std::u32string folded = fold_case(token.surface);
      auto [it, inserted] =
          terms_.try_emplace(folded, static_cast<TermId>(term_text_.size()));
      if (inserted) term_text_.push_back(std::move(folded));
      ids.push_back(it->second);
    }
    doc_terms_.push_back(std::move(ids));
  }
  for (std::size_t d = 0; d < doc_terms_.size(); ++d) {
    const auto& ids = doc_terms_[d];
    if (ids.size() < gram_width_) continue;
    for (std::size_t p = 0; p + gram_width_ <= ids.size(); ++p) {
      GramKey key(gram_width_, U'\0');
      for (std::size_t k = 0; k < gram_width_; ++k) {
        key[k] = static_cast<char32_t>(ids[p + k]);
      }
      postings_[key].push_back(
          Posting{static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(p)});
    }
  }
}

std::size_t PhraseIndex::posting_count() const {
  std::size_t total = 0;
  for (const auto& [key, list] : postings_) total += list.size();
  return total;
}

PhraseIndex::DocumentPtr PhraseIndex::find_document(std::string_view id) const {
  for (const DocumentPtr& doc : corpus_) {
    if (doc->id == id) return doc;
  }
  return nullptr;
}

std::optional<PhraseIndex::TermId> PhraseIndex::lookup_term(
    std::u32string_view folded) const {
  auto it = terms_.find(std::u32string(folded));
  if (it == terms_.end()) return std::nullopt;
  return it->second;
}

bool PhraseIndex::matches_at(std::size_t doc, std::size_t position,
                             const std::vector<TermId>& terms) const {
  const auto& ids = doc_terms_[doc];
  if (position + terms.size() > ids.size()) return false;
  return std::equal(terms.begin(), terms.end(), ids.begin() + position);
}

SearchHit PhraseIndex::make_hit(std::size_t doc, std::size_t position,
                                std::size_t length) const {
  const Document& d = *corpus_[doc];
  return SearchHit{d.id, d.source_uri,
                   CharSpan{d.tokens[position].start,
                            d.tokens[position + length - 1].end}};
}

std::vector<SearchHit> PhraseIndex::phrase_search(
    std::u32string_view phrase) const {
  const std::vector<Token> tokens = tokenize(phrase);
  if (tokens.empty()) throw QueryRejected("empty phrase");
  std::vector<TermId> terms;
  terms.reserve(tokens.size());
  for (const Token& t : tokens) {
    const auto id = lookup_term(fold_case(t.surface));
    if (!id) return {};
    terms.push_back(*id);
  }

  std::vector<SearchHit> hits;
  if (terms.size() < gram_width_) {
    for (std::size_t d = 0; d < doc_terms_.size(); ++d) {
      for (std::size_t p = 0; p + terms.size() <= doc_terms_[d].size(); ++p) {
        if (matches_at(d, p, terms)) hits.push_back(make_hit(d, p, terms.size()));
      }
    }
  } else {
    const std::vector<Posting>* rarest = nullptr;
    std::size_t rarest_offset = 0;
    for (std::size_t j = 0; j + gram_width_ <= terms.size(); ++j) {
      GramKey key(gram_width_, U'\0');
      for (std::size_t k = 0; k < gram_width_; ++k) {
        key[k] = static_cast<char32_t>(terms[j + k]);
      }
      auto it = postings_.find(key);
      if (it == postings_.end()) return {};
      if (rarest == nullptr || it->second.size() < rarest->size()) {
        rarest = &it->second;
        rarest_offset = j;
      }
    }
    for (const Posting& posting : *rarest) {
      if (posting.position < rarest_offset) continue;
      const std::size_t start = posting.position - rarest_offset;
      if (matches_at(posting.doc, start, terms)) {
        hits.push_back(make_hit(posting.doc, start, terms.size()));
      }
    }
  }
  std::sort(hits.begin(), hits.end(), hit_less);
  return hits;
}

std::vector<PhraseIndex::Posting> PhraseIndex::postings_for(
    const std::vector<std::u32string>& tokens) const {
  if (tokens.size() != gram_width_) return {};
  GramKey key(gram_width_, U'\0');
  for (std::size_t k = 0; k < gram_width_; ++k) {
    const auto id = lookup_term(fold_case(tokens[k]));
    if (!id) return {};
    key[k] = static_cast<char32_t>(*id);
  }
  auto it = postings_.find(key);
  return it == postings_.end() ? std::vector<Posting>{} : it->second;
}

std::map<std::u32string, std::vector<PhraseIndex::Posting>>
PhraseIndex::dump_postings() const {
  std::map<std::u32string, std::vector<Posting>> out;
  for (const auto& [key, list] : postings_) {
    std::u32string text;
    for (std::size_t k = 0; k < key.size(); ++k) {
      if (k > 0) text.push_back(U' ');
      text += term_text_[static_cast<TermId>(key[k])];
    }
    out.emplace(std::move(text), list);
  }
  return out;
}

std::shared_ptr<const PhraseIndex> build_index(
    std::vector<PhraseIndex::DocumentPtr> corpus, std::size_t gram_width) {
  return std::make_shared<const PhraseIndex>(std::move(corpus), gram_width);
}

}  // namespace antiplag
