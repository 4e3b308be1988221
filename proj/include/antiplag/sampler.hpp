#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "antiplag/textmodel.hpp"

namespace antiplag {

enum class MatchMode { Exact, EditDistance };

std::string_view to_string(MatchMode mode);
MatchMode parse_match_mode(std::string_view text);

struct EngineConfig {
  std::size_t window_size = 5;      // words per sampling query
  std::size_t step_size = 6;        // words between query starts
  double edit_ratio = 0.05;         // edits allowed per character
  std::size_t min_sample_hits = 2;  // match areas needed before a download
  std::size_t min_area_chars = 50;
  double alert_threshold = 0.25;
  MatchMode match_mode = MatchMode::EditDistance;
  std::size_t max_hits = 10;        // provider results consumed per query
  std::size_t expansion_step = 0;   // characters per growth step; 0 = auto

  /// Throws ConfigError when a field is outside its domain.
  void validate() const;

  /// Ratio actually applied; zero in Exact mode.
  double effective_edit_ratio() const;
  std::size_t effective_expansion_step() const;
  std::size_t index_gram_width() const;

  /// floor(effective ratio * length).
  std::size_t budget_for_length(std::size_t length) const;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

struct SampleQuery {
  std::size_t ordinal = 0;
  std::size_t token_start = 0;
  std::size_t token_end = 0;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::u32string phrase;

  CharSpan span() const { return {char_start, char_end}; }
};

/// Windows of W tokens starting every S tokens; a trailing window shorter
/// than W is not emitted.
std::vector<SampleQuery> generate_queries(const Document& doc,
                                          const EngineConfig& config);

/// Number of queries generate_queries yields for a document of
/// `token_count` tokens.
std::size_t expected_query_count(std::size_t token_count, std::size_t window,
                                 std::size_t step);

std::size_t query_edit_budget(const SampleQuery& query,
                              const EngineConfig& config);

}  // namespace antiplag
