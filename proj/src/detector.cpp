#include "antiplag/detector.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "antiplag/errors.hpp"

namespace antiplag {

namespace {

CharSpan hull(const CharSpan& a, const CharSpan& b) {
  return {std::min(a.start, b.start), std::max(a.end, b.end)};
}

bool contains(const SpanMatch& outer, const SpanMatch& inner) {
  return outer.suspect.contains(inner.suspect) &&
         outer.source.contains(inner.source);
}

std::size_t union_length(std::vector<CharSpan> spans) {
  std::sort(spans.begin(), spans.end());
  std::size_t total = 0;
  std::size_t covered_to = 0;
  for (const CharSpan& s : spans) {
    const std::size_t from = std::max(s.start, covered_to);
    if (s.end > from) {
      total += s.end - from;
      covered_to = s.end;
    }
  }
  return total;
}

}  // namespace

SamplingResult sampling_phase(const Document& suspect, const EngineConfig& config,
                              const SearchProvider& provider,
                              SampledSourceStore* store) {
  config.validate();
  const std::vector<SampleQuery> queries = generate_queries(suspect, config);

  struct Seeded {
    MatchArea area;
    std::set<std::string> unlocated;  // hits that came without offsets
  };
  std::vector<Seeded> seeded;
  std::map<std::string, SearchHit> first_hit;
  std::map<std::string, std::size_t> area_count;

  for (const SampleQuery& query : queries) {
    const auto hits = provider_search(provider, query.phrase, config.max_hits);
    if (hits.empty()) continue;
    Seeded s;
    s.area.suspect_span = query.span();
    s.area.origin_queries.insert(query.ordinal);
    for (const SearchHit& hit : hits) {
      if (s.area.sources.contains(hit.source_id)) continue;
      s.area.sources[hit.source_id] =
          SpanMatch{query.span(), hit.span.value_or(CharSpan{}), 0};
      if (!hit.span) s.unlocated.insert(hit.source_id);
      first_hit.try_emplace(hit.source_id, hit);
      ++area_count[hit.source_id];
    }
    seeded.push_back(std::move(s));
  }

  SamplingResult result;
  // Download everything before touching the store so a provider failure
  // leaves no partial state behind.
  for (const auto& [id, count] : area_count) {
    if (count < config.min_sample_hits) continue;
    result.fetched[id] =
        std::make_shared<const Document>(provider.fetch(first_hit.at(id)));
  }
  for (const auto& [id, doc] : result.fetched) {
    result.sampled_ids.insert(id);
    if (store != nullptr) {
      const std::string local_id = store_sampled_source(*store, *doc);
      result.local_ids[id] = local_id;
      result.source_uris[id] = store->relative_path_for(local_id);
    } else {
      result.source_uris[id] =
          doc->source_uri.empty() ? first_hit.at(id).source_uri : doc->source_uri;
    }
  }

  for (Seeded& s : seeded) {
    for (auto it = s.area.sources.begin(); it != s.area.sources.end();) {
      auto fetched = result.fetched.find(it->first);
      if (fetched == result.fetched.end()) {
        it = s.area.sources.erase(it);
        continue;
      }
      if (s.unlocated.contains(it->first)) {
        const auto phrase = suspect.slice(s.area.suspect_span);
        const auto matches = approx_find(
            phrase, fetched->second->text,
            config.budget_for_length(phrase.size()));
        auto best = std::min_element(
            matches.begin(), matches.end(),
            [](const SpanMatch& a, const SpanMatch& b) {
              return std::tie(a.edit_cost, a.source.start) <
                     std::tie(b.edit_cost, b.source.start);
            });
        if (best == matches.end()) {
          it = s.area.sources.erase(it);
          continue;
        }
        it->second.source = best->source;
        it->second.edit_cost = best->edit_cost;
      }
      ++it;
    }
    if (!s.area.sources.empty()) result.areas.push_back(std::move(s.area));
  }
  return result;
}

std::vector<MatchArea> expansion_phase(const Document& suspect,
                                       std::vector<MatchArea> areas,
                                       const SourceResolver& resolver,
                                       const EngineConfig& config) {
  std::stable_sort(areas.begin(), areas.end(),
                   [](const MatchArea& a, const MatchArea& b) {
                     return a.suspect_span.start < b.suspect_span.start;
                   });
  const std::size_t step = config.effective_expansion_step();
  const double ratio = config.effective_edit_ratio();
  // Grown spans per source; a seed already inside one of them reuses it
  // instead of regrowing to the same fixpoint.
  std::map<std::string, std::vector<SpanMatch>> grown;

  for (MatchArea& area : areas) {
    CharSpan span = area.suspect_span;
    for (auto& [source_id, match] : area.sources) {
      const auto& previous = grown[source_id];
      auto reuse = std::find_if(previous.begin(), previous.end(),
                                [&](const SpanMatch& g) { return contains(g, match); });
      if (reuse != previous.end()) {
        match = *reuse;
      } else {
        const DocumentPtr source = resolver(source_id);
        if (!source) throw MissingSource("cannot resolve source '" + source_id + "'");
        match = expand_to_fixpoint(suspect, *source, match, step, ratio);
        grown[source_id].push_back(match);
      }
      span = hull(span, match.suspect);
    }
    area.suspect_span = span;
  }
  return areas;
}

SpanMatch hull_join(const std::string&, const SpanMatch& a, const SpanMatch& b) {
  if (contains(a, b)) return a;
  if (contains(b, a)) return b;
  return SpanMatch{hull(a.suspect, b.suspect), hull(a.source, b.source),
                   a.edit_cost + b.edit_cost};
}

SpanJoin verified_join(const Document& suspect, const SourceResolver& resolver,
                       const EngineConfig& config) {
  return [&suspect, resolver, config](const std::string& source_id,
                                      const SpanMatch& a, const SpanMatch& b) {
    if (contains(a, b)) return a;
    if (contains(b, a)) return b;
    const DocumentPtr source = resolver(source_id);
    if (!source) throw MissingSource("cannot resolve source '" + source_id + "'");
    SpanMatch joined{hull(a.suspect, b.suspect), hull(a.source, b.source), 0};
    const auto cost = bounded_edit_distance(
        suspect.slice(joined.suspect), source->slice(joined.source),
        config.budget_for_length(joined.suspect.length()));
    if (cost) {
      joined.edit_cost = *cost;
      return joined;
    }
    if (a.suspect.length() != b.suspect.length()) {
      return a.suspect.length() > b.suspect.length() ? a : b;
    }
    if (a.edit_cost != b.edit_cost) return a.edit_cost < b.edit_cost ? a : b;
    return a.suspect.start <= b.suspect.start ? a : b;
  };
}

std::vector<MatchArea> merge_areas(std::vector<MatchArea> areas,
                                   const SpanJoin& join) {
  std::sort(areas.begin(), areas.end(), [](const MatchArea& a, const MatchArea& b) {
    return a.suspect_span < b.suspect_span;
  });
  std::vector<MatchArea> merged;
  for (MatchArea& area : areas) {
    if (merged.empty() || area.suspect_span.start > merged.back().suspect_span.end) {
      merged.push_back(std::move(area));
      continue;
    }
    MatchArea& current = merged.back();
    current.suspect_span = hull(current.suspect_span, area.suspect_span);
    current.origin_queries.insert(area.origin_queries.begin(),
                                  area.origin_queries.end());
    for (auto& [source_id, match] : area.sources) {
      auto it = current.sources.find(source_id);
      if (it == current.sources.end()) {
        current.sources.emplace(source_id, match);
      } else {
        it->second = join(source_id, it->second, match);
      }
    }
  }
  return merged;
}

std::vector<MatchArea> filter_results(std::vector<MatchArea> areas,
                                      const EngineConfig& config) {
  std::map<std::string, std::size_t> appearances;
  for (const MatchArea& area : areas) {
    for (const auto& [source_id, match] : area.sources) ++appearances[source_id];
  }
  std::vector<MatchArea> kept;
  for (MatchArea& area : areas) {
    if (area.suspect_span.length() < config.min_area_chars) {
      std::erase_if(area.sources, [&](const auto& entry) {
        return appearances[entry.first] == 1;
      });
    }
    if (!area.sources.empty()) kept.push_back(std::move(area));
  }
  return kept;
}

DetectionResult score(const Document& suspect, std::vector<MatchArea> areas,
                      const EngineConfig& config) {
  DetectionResult result;
  result.suspect_id = suspect.id;
  result.suspect_uri = suspect.source_uri;
  result.text_length = suspect.length();
  result.config = config;

  std::vector<CharSpan> spans;
  std::map<std::string, std::vector<CharSpan>> per_source;
  for (const MatchArea& area : areas) {
    spans.push_back(area.suspect_span);
    for (const auto& [source_id, match] : area.sources) {
      per_source[source_id].push_back(match.suspect);
    }
  }
  result.covered_chars = union_length(spans);
  for (auto& [source_id, list] : per_source) {
    result.per_source_coverage[source_id] = union_length(std::move(list));
  }
  result.areas = std::move(areas);
  result.percent_plagiarized =
      result.text_length == 0
          ? 0.0
          : static_cast<double>(result.covered_chars) /
                static_cast<double>(result.text_length);
  result.alert = result.percent_plagiarized >= config.alert_threshold;
  return result;
}

DetectionResult detect(const Document& suspect, const EngineConfig& config,
                       const DetectionContext& context) {
  config.validate();
  std::unique_ptr<LocalProvider> hermetic;
  const SearchProvider* provider = context.provider;
  SampledSourceStore* store = context.store;
  if (provider == nullptr) {
    if (!context.local_corpus) {
      throw ConfigError("detection needs a provider or a local corpus");
    }
    hermetic = std::make_unique<LocalProvider>(context.local_corpus);
    provider = hermetic.get();
    store = nullptr;
  }

  SamplingResult sampling = sampling_phase(suspect, config, *provider, store);

  std::map<std::string, DocumentPtr> loaded;
  const SourceResolver resolver = [&](const std::string& id) -> DocumentPtr {
    if (auto it = loaded.find(id); it != loaded.end()) return it->second;
    DocumentPtr doc;
    if (auto local = sampling.local_ids.find(id);
        store != nullptr && local != sampling.local_ids.end()) {
      doc = std::make_shared<const Document>(store->load(local->second));
    } else if (auto fetched = sampling.fetched.find(id);
               fetched != sampling.fetched.end()) {
      doc = fetched->second;
    }
    if (doc) loaded.emplace(id, doc);
    return doc;
  };

  auto areas = expansion_phase(suspect, std::move(sampling.areas), resolver, config);
  areas = merge_areas(std::move(areas), verified_join(suspect, resolver, config));
  areas = filter_results(std::move(areas), config);
  DetectionResult result = score(suspect, std::move(areas), config);
  for (const auto& [source_id, covered] : result.per_source_coverage) {
    result.source_uris[source_id] = sampling.source_uris.at(source_id);
  }
  return result;
}

std::vector<BatchItem> detect_batch(const std::vector<DocumentPtr>& suspects,
                                    const EngineConfig& config,
                                    const DetectionContext& context,
                                    std::size_t jobs) {
  std::vector<BatchItem> items(suspects.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < suspects.size(); i = next++) {
      items[i].suspect_id = suspects[i]->id;
      try {
        items[i].result = detect(*suspects[i], config, context);
      } catch (const std::exception& e) {
        items[i].error = e.what();
      }
    }
  };
  const std::size_t threads =
      std::max<std::size_t>(1, std::min(jobs, suspects.size()));
  if (threads == 1) {
    worker();
    return items;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return items;
}

}  // namespace antiplag
