#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "antiplag/textmodel.hpp"

namespace antiplag {

struct SearchHit {
  std::string source_id;
  std::string source_uri;
  // Absent for providers that only report which documents matched.
  std::optional<CharSpan> span;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Orders hits by (source_id, char_start); hits without offsets sort first
/// within their source.
bool hit_less(const SearchHit& a, const SearchHit& b);

/// Case-insensitive exact-phrase index over token n-grams. Phrase lookups pick
/// the rarest n-gram of the phrase and verify every candidate position
/// token by token, so results match a linear scan exactly.
class PhraseIndex {
 public:
  using DocumentPtr = std::shared_ptr<const Document>;

  PhraseIndex(std::vector<DocumentPtr> corpus, std::size_t gram_width);

  std::size_t gram_width() const { return gram_width_; }
  std::size_t document_count() const { return corpus_.size(); }
  std::size_t posting_count() const;
  std::size_t key_count() const { return postings_.size(); }

  const std::vector<DocumentPtr>& documents() const { return corpus_; }
  DocumentPtr find_document(std::string_view id) const;

  /// All occurrences of the phrase, sorted per hit_less. Phrases shorter than
  /// the gram width are answered by a linear scan. Throws QueryRejected for
  /// an empty phrase.
  std::vector<SearchHit> phrase_search(std::u32string_view phrase) const;

  struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t position = 0;  // token index
    friend bool operator==(const Posting&, const Posting&) = default;
  };

  /// Postings for the n-gram made of `tokens` (exactly gram_width entries,
  /// compared case-insensitively). Empty when absent.
  std::vector<Posting> postings_for(
      const std::vector<std::u32string>& tokens) const;

  /// Every key with its postings, as folded n-gram text, sorted. For
  /// inspection and tests.
  std::map<std::u32string, std::vector<Posting>> dump_postings() const;

 private:
  using TermId = std::uint32_t;
  // Term-id sequence of one n-gram, carried in a u32string for hashing.
  using GramKey = std::u32string;

  std::optional<TermId> lookup_term(std::u32string_view folded) const;
  bool matches_at(std::size_t doc, std::size_t position,
                  const std::vector<TermId>& terms) const;
  SearchHit make_hit(std::size_t doc, std::size_t position,
                     std::size_t length) const;

  std::vector<DocumentPtr> corpus_;
  std::size_t gram_width_;
  std::unordered_map<std::u32string, TermId> terms_;
  std::vector<std::u32string> term_text_;
  std::vector<std::vector<TermId>> doc_terms_;
  std::unordered_map<GramKey, std::vector<Posting>> postings_;
};

std::shared_ptr<const PhraseIndex> build_index(
    std::vector<PhraseIndex::DocumentPtr> corpus, std::size_t gram_width);

/// An exact-phrase search service, standing in for a web search engine.
class SearchProvider {
 public:
  virtual ~SearchProvider() = default;

  /// Short name used for the sampled/<provider>/ directory.
  virtual std::string name() const = 0;

  /// Up to max_hits hits in a stable order. May throw ProviderUnavailable
  /// (transient) or QueryRejected.
  virtual std::vector<SearchHit> search(std::u32string_view phrase,
                                        std::size_t max_hits) const = 0;

  /// Downloads the document behind a hit. May throw ProviderUnavailable.
  virtual Document fetch(const SearchHit& hit) const = 0;
};

/// Validates the request and forwards to the provider.
std::vector<SearchHit> provider_search(const SearchProvider& provider,
                                       std::u32string_view phrase,
                                       std::size_t max_hits);

class LocalProvider final : public SearchProvider {
 public:
  explicit LocalProvider(std::shared_ptr<const PhraseIndex> index,
                         std::string name = "local");

  std::string name() const override { return name_; }
  std::vector<SearchHit> search(std::u32string_view phrase,
                                std::size_t max_hits) const override;
  Document fetch(const SearchHit& hit) const override;

  const PhraseIndex& index() const { return *index_; }

 private:
  std::shared_ptr<const PhraseIndex> index_;
  std::string name_;
};

/// Loads every .txt/.html/.htm file under `dir` (recursively, sorted by path)
/// as a corpus document. Ids are paths relative to `dir` without extension.
std::vector<PhraseIndex::DocumentPtr> load_corpus(
    const std::filesystem::path& dir, Origin origin = Origin::LocalCorpus);

struct ManifestEntry {
  std::string uri;
  std::string id;
  std::string sha256;
  std::string fetched_at;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// The local database of downloaded sources: normalized plain text under
/// <root>/<provider>/<id>.txt plus <root>/manifest.json.
class SampledSourceStore {
 public:
  SampledSourceStore(std::filesystem::path root, std::string provider);

  /// Persists the source and returns its local id. Storing identical
  /// content again is a no-op. Throws StorageFailure.
  std::string store(const Document& source);

  /// Reads a stored source back as a SampledWeb document.
  Document load(const std::string& local_id) const;

  std::optional<ManifestEntry> entry_for_uri(const std::string& uri) const;
  std::map<std::string, ManifestEntry> manifest() const;

  const std::filesystem::path& root() const { return root_; }
  const std::string& provider() const { return provider_; }
  std::filesystem::path path_for(const std::string& local_id) const;
  /// Path of a stored source relative to the workspace (the store's parent).
  std::string relative_path_for(const std::string& local_id) const;

 private:
  void load_manifest();
  void save_manifest() const;

  std::filesystem::path root_;
  std::string provider_;
  mutable std::mutex mutex_;
  std::map<std::string, ManifestEntry> manifest_;  // keyed by uri
};

std::string store_sampled_source(SampledSourceStore& store,
                                 const Document& source);

/// UTC timestamp in ISO 8601. Honors SOURCE_DATE_EPOCH when set.
std::string current_timestamp();

}  // namespace antiplag
