#include "antiplag/sampler.hpp"

#include "antiplag/errors.hpp"
#include "antiplag/matcher.hpp"

namespace antiplag {

std::string_view to_string(MatchMode mode) {
  return mode == MatchMode::Exact ? "exact" : "edit";
}

MatchMode parse_match_mode(std::string_view text) {
  if (text == "exact") return MatchMode::Exact;
  if (text == "edit") return MatchMode::EditDistance;
  throw ConfigError("unknown match mode '" + std::string(text) + "'");
}

void EngineConfig::validate() const {
  if (window_size < 1) throw ConfigError("window size must be >= 1");
  if (step_size < 1) throw ConfigError("step size must be >= 1");
  if (!(edit_ratio >= 0.0 && edit_ratio <= 1.0)) {
    throw ConfigError("edit ratio must lie in [0, 1]");
  }
  if (min_sample_hits < 1) throw ConfigError("min sample hits must be >= 1");
  if (min_area_chars < 1) throw ConfigError("min area chars must be >= 1");
  if (!(alert_threshold > 0.0 && alert_threshold <= 1.0)) {
    throw ConfigError("alert threshold must lie in (0, 1]");
  }
  if (max_hits < 1) throw ConfigError("max hits must be >= 1");
}

double EngineConfig::effective_edit_ratio() const {
  return match_mode == MatchMode::Exact ? 0.0 : edit_ratio;
}

std::size_t EngineConfig::effective_expansion_step() const {
  // Average English word plus separator is about six characters.
  return expansion_step > 0 ? expansion_step : window_size * 6;
}

std::size_t EngineConfig::index_gram_width() const {
  return window_size < 3 ? window_size : 3;
}

std::size_t EngineConfig::budget_for_length(std::size_t length) const {
  return edit_budget(effective_edit_ratio(), length);
}

std::vector<SampleQuery> generate_queries(const Document& doc,
                                          const EngineConfig& config) {
  config.validate();
  std::vector<SampleQuery> queries;
  const std::size_t token_count = doc.tokens.size();
  const std::size_t w = config.window_size;
  if (token_count < w) return queries;
  queries.reserve(expected_query_count(token_count, w, config.step_size));
  for (std::size_t start = 0; start + w <= token_count;
       start += config.step_size) {
    SampleQuery q;
    q.ordinal = queries.size();
    q.token_start = start;
    q.token_end = start + w;
    q.char_start = doc.tokens[start].start;
    q.char_end = doc.tokens[start + w - 1].end;
    for (std::size_t t = start; t < start + w; ++t) {
      if (t > start) q.phrase.push_back(U' ');
      q.phrase += doc.tokens[t].surface;
    }
    queries.push_back(std::move(q));
  }
  return queries;
}

std::size_t expected_query_count(std::size_t token_count, std::size_t window,
                                 std::size_t step) {
  if (window == 0 || step == 0 || token_count < window) return 0;
  return (token_count - window) / step + 1;
}

std::size_t query_edit_budget(const SampleQuery& query,
                              const EngineConfig& config) {
  return config.budget_for_length(query.phrase.size());
}

}  // namespace antiplag
