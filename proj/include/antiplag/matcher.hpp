#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "antiplag/textmodel.hpp"

namespace antiplag {

/// An aligned pair of spans: suspect text on one side, a source on the
/// other, with the number of edits the alignment needs.
struct SpanMatch {
  CharSpan suspect;
  CharSpan source;
  std::size_t edit_cost = 0;

  friend bool operator==(const SpanMatch&, const SpanMatch&) = default;
};

enum class Direction { Left, Right, Both };

/// Unit-cost Levenshtein distance over case-folded code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

/// edit_distance(a, b) when it is at most `limit`, otherwise nullopt.
/// Runs in O(limit * max(|a|, |b|)).
std::optional<std::size_t> bounded_edit_distance(std::u32string_view a,
                                                 std::u32string_view b,
                                                 std::size_t limit);

/// Occurrences of `pattern` in `text` within `budget` edits. Every non-empty
/// text span whose distance to the whole pattern is within budget is a
/// candidate; candidates are taken in (cost, start, end) order and kept when
/// they overlap no span kept before. The result is sorted by start.
/// In each match, `suspect` covers the whole pattern and `source` is the
/// text span. Throws std::invalid_argument for an empty pattern.
std::vector<SpanMatch> approx_find(std::u32string_view pattern,
                                   std::u32string_view text,
                                   std::size_t budget);

/// Grows the seed's suspect span by `step_chars` toward `direction` (clipped
/// to the document) and realigns it against the source near the seed's
/// source span. Succeeds when the grown span aligns with at most
/// floor(edit_ratio * grown length) edits; the result strictly contains the
/// seed's suspect span.
std::optional<SpanMatch> extend_match(const Document& suspect,
                                      const Document& source,
                                      const SpanMatch& seed,
                                      Direction direction,
                                      std::size_t step_chars,
                                      double edit_ratio);

/// Repeats extend_match until no direction grows: Both first, then Left and
/// Right independently in each round. The returned edit_cost is exact.
SpanMatch expand_to_fixpoint(const Document& suspect, const Document& source,
                             SpanMatch seed, std::size_t step_chars,
                             double edit_ratio);

/// floor(ratio * length), robust to binary rounding of the ratio.
std::size_t edit_budget(double ratio, std::size_t length);

}  // namespace antiplag
