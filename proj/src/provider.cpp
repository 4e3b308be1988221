#include <algorithm>
#include <cctype>

#include "antiplag/errors.hpp"
#include "antiplag/searchindex.hpp"

namespace antiplag {

std::vector<SearchHit> provider_search(const SearchProvider& provider,
                                       std::u32string_view phrase,
                                       std::size_t max_hits) {
  if (max_hits == 0) throw QueryRejected("max_hits must be positive");
  if (tokenize(phrase).empty()) throw QueryRejected("empty phrase");
  std::vector<SearchHit> hits = provider.search(phrase, max_hits);
  if (hits.size() > max_hits) hits.resize(max_hits);
  return hits;
}

LocalProvider::LocalProvider(std::shared_ptr<const PhraseIndex> index,
                             std::string name)
    : index_(std::move(index)), name_(std::move(name)) {
  if (!index_) throw ConfigError("local provider needs an index");
}

std::vector<SearchHit> LocalProvider::search(std::u32string_view phrase,
                                             std::size_t max_hits) const {
  std::vector<SearchHit> hits = index_->phrase_search(phrase);
  if (hits.size() > max_hits) hits.resize(max_hits);
  return hits;
}

Document LocalProvider::fetch(const SearchHit& hit) const {
  const auto doc = index_->find_document(hit.source_id);
  if (!doc) {
    throw ProviderUnavailable("source '" + hit.source_id +
                              "' is not served by provider " + name_);
  }
  Document copy = *doc;
  copy.origin = Origin::SampledWeb;
  return copy;
}

std::vector<PhraseIndex::DocumentPtr> load_corpus(
    const std::filesystem::path& dir, Origin origin) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw IoFailure("corpus directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".txt" || ext == ".html" || ext == ".htm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<PhraseIndex::DocumentPtr> docs;
  docs.reserve(files.size());
  for (const fs::path& file : files) {
    fs::path rel = fs::relative(file, dir);
    rel.replace_extension();
    try {
      docs.push_back(std::make_shared<const Document>(
          ingest_file(file.string(), origin, rel.generic_string())));
    } catch (const EmptyDocument&) {
      // Nothing to index.
    }
  }
  return docs;
}

}  // namespace antiplag
