#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "antiplag/matcher.hpp"
#include "antiplag/sampler.hpp"
#include "antiplag/searchindex.hpp"
#include "antiplag/textmodel.hpp"

namespace antiplag {

/// A span of the suspect linked to the sources that match it.
struct MatchArea {
  CharSpan suspect_span;
  std::map<std::string, SpanMatch> sources;
  std::set<std::size_t> origin_queries;

  friend bool operator==(const MatchArea&, const MatchArea&) = default;
};

struct DetectionResult {
  std::string suspect_id;
  std::string suspect_uri;
  std::size_t text_length = 0;
  std::size_t covered_chars = 0;
  std::vector<MatchArea> areas;  // ordered by start, pairwise disjoint
  double percent_plagiarized = 0.0;  // fraction in [0, 1]
  bool alert = false;
  std::map<std::string, std::size_t> per_source_coverage;
  std::map<std::string, std::string> source_uris;  // link target per source
  EngineConfig config;

  friend bool operator==(const DetectionResult&, const DetectionResult&) = default;
};

using DocumentPtr = std::shared_ptr<const Document>;
using SourceResolver = std::function<DocumentPtr(const std::string& source_id)>;

struct SamplingResult {
  std::vector<MatchArea> areas;
  std::set<std::string> sampled_ids;
  std::map<std::string, std::string> source_uris;
  std::map<std::string, std::string> local_ids;  // when a store was used
  std::map<std::string, DocumentPtr> fetched;
};

/// Queries the provider with every sampling window. Sources matched by at
/// least min_sample_hits areas are downloaded (and persisted when `store` is
/// given); all other sources are dropped. A provider failure aborts the whole
/// phase before anything is stored.
SamplingResult sampling_phase(const Document& suspect, const EngineConfig& config,
                              const SearchProvider& provider,
                              SampledSourceStore* store);

/// Grows each (area, source) seed to its fixpoint, in area then source-id
/// order. Throws MissingSource when the resolver cannot supply a source.
std::vector<MatchArea> expansion_phase(const Document& suspect,
                                       std::vector<MatchArea> areas,
                                       const SourceResolver& resolver,
                                       const EngineConfig& config);

/// Combines two spans of the same source when their areas merge.
using SpanJoin = std::function<SpanMatch(const std::string& source_id,
                                         const SpanMatch& a, const SpanMatch& b)>;

/// Hull of both spans; the cost is the sum of the parts.
SpanMatch hull_join(const std::string& source_id, const SpanMatch& a,
                    const SpanMatch& b);

/// Hull of both spans when the hull still fits the edit budget (its cost is
/// recomputed), otherwise the longer of the two.
SpanJoin verified_join(const Document& suspect, const SourceResolver& resolver,
                       const EngineConfig& config);

/// Merges overlapping or touching areas. Output is sorted and disjoint.
std::vector<MatchArea> merge_areas(std::vector<MatchArea> areas,
                                   const SpanJoin& join = hull_join);

/// Removes each source that appears in exactly one area shorter than
/// min_area_chars, then drops areas left without sources.
std::vector<MatchArea> filter_results(std::vector<MatchArea> areas,
                                      const EngineConfig& config);

DetectionResult score(const Document& suspect, std::vector<MatchArea> areas,
                      const EngineConfig& config);

struct DetectionContext {
  /// Web-style provider; when null, detection is hermetic over local_corpus.
  const SearchProvider* provider = nullptr;
  SampledSourceStore* store = nullptr;
  std::shared_ptr<const PhraseIndex> local_corpus;
};

DetectionResult detect(const Document& suspect, const EngineConfig& config,
                       const DetectionContext& context);

struct BatchItem {
  std::string suspect_id;
  std::optional<DetectionResult> result;
  std::string error;  // set when result is empty
};

/// Runs detect for every suspect on up to `jobs` threads. A failing document
/// yields an error item; results keep the input order.
std::vector<BatchItem> detect_batch(const std::vector<DocumentPtr>& suspects,
                                    const EngineConfig& config,
                                    const DetectionContext& context,
                                    std::size_t jobs);

}  // namespace antiplag
