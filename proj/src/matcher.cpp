#include "antiplag/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "antiplag/unicode.hpp"

namespace antiplag {

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;

std::size_t distance_from(std::size_t a, std::size_t b) {
  return a > b ? a - b : b - a;
}

struct PieceAlignment {
  std::size_t cost = 0;
  std::size_t consumed = 0;  // source characters used
};

// Aligns all of `piece` against source characters next to `anchor`, walking
// left (toward the start of the source) or right. The far end is free; at
// most `max_consumed` source characters are considered.
PieceAlignment align_piece(std::u32string_view piece,
                           std::u32string_view source, std::size_t anchor,
                           bool leftward, std::size_t max_consumed) {
  const std::size_t m = piece.size();
  const std::size_t available = leftward ? anchor : source.size() - anchor;
  const std::size_t limit = std::min(available, max_consumed);
  std::vector<std::size_t> col(m + 1);
  std::vector<std::size_t> next(m + 1);
  for (std::size_t i = 0; i <= m; ++i) col[i] = i;
  PieceAlignment best{col[m], 0};
  for (std::size_t j = 1; j <= limit; ++j) {
    const char32_t sc = leftward ? source[anchor - j] : source[anchor + j - 1];
    next[0] = j;
    for (std::size_t i = 1; i <= m; ++i) {
      const char32_t pc = leftward ? piece[m - i] : piece[i - 1];
      next[i] = std::min({col[i - 1] + (same_folded(pc, sc) ? 0 : 1),
                          col[i] + 1, next[i - 1] + 1});
    }
    std::swap(col, next);
    if (col[m] < best.cost ||
        (col[m] == best.cost &&
         distance_from(j, m) < distance_from(best.consumed, m))) {
      best = {col[m], j};
    }
  }
  return best;
}

// Best alignment of the whole pattern to some non-empty span of `window`.
// Ties go to the span closest to the expected bounds.
SpanMatch realign(std::u32string_view pattern, std::u32string_view window,
                  std::size_t expected_start, std::size_t expected_end) {
  const std::size_t m = pattern.size();
  const std::size_t w = window.size();
  std::vector<std::size_t> col(m + 1);
  std::vector<std::size_t> next(m + 1);
  for (std::size_t i = 0; i <= m; ++i) col[i] = i;

  std::size_t best_end = 0;
  std::size_t best_cost = kInf;
  for (std::size_t j = 1; j <= w; ++j) {
    const char32_t tc = window[j - 1];
    next[0] = 0;
    for (std::size_t i = 1; i <= m; ++i) {
      next[i] = std::min({col[i - 1] + (same_folded(pattern[i - 1], tc) ? 0 : 1),
                          col[i] + 1, next[i - 1] + 1});
    }
    std::swap(col, next);
    if (col[m] < best_cost ||
        (col[m] == best_cost && distance_from(j, expected_end) <
                                    distance_from(best_end, expected_end))) {
      best_cost = col[m];
      best_end = j;
    }
  }
  if (best_end == 0) return SpanMatch{{0, m}, {0, 0}, kInf};

  // Reverse pass anchored at best_end recovers the start.
  for (std::size_t i = 0; i <= m; ++i) col[i] = i;
  std::size_t best_start = best_end;
  std::size_t start_cost = kInf;
  for (std::size_t l = 1; l <= best_end; ++l) {
    const char32_t tc = window[best_end - l];
    next[0] = l;
    for (std::size_t i = 1; i <= m; ++i) {
      next[i] = std::min({col[i - 1] + (same_folded(pattern[m - i], tc) ? 0 : 1),
                          col[i] + 1, next[i - 1] + 1});
    }
    std::swap(col, next);
    const std::size_t start = best_end - l;
    if (col[m] < start_cost ||
        (col[m] == start_cost && distance_from(start, expected_start) <
                                     distance_from(best_start, expected_start))) {
      start_cost = col[m];
      best_start = start;
    }
  }
  return SpanMatch{{0, m}, {best_start, best_end}, start_cost};
}

}  // namespace

std::size_t edit_budget(double ratio, std::size_t length) {
  if (ratio <= 0.0) return 0;
  return static_cast<std::size_t>(
      std::floor(ratio * static_cast<double>(length) + 1e-9));
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = std::min({diagonal + (same_folded(a[i - 1], b[j - 1]) ? 0 : 1),
                         above + 1, row[j - 1] + 1});
      diagonal = above;
    }
  }
  return row[b.size()];
}

std::optional<std::size_t> bounded_edit_distance(std::u32string_view a,
                                                 std::u32string_view b,
                                                 std::size_t limit) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (distance_from(n, m) > limit) return std::nullopt;
  std::vector<std::size_t> prev(m + 2, kInf);
  std::vector<std::size_t> cur(m + 2, kInf);
  for (std::size_t j = 0; j <= std::min(m, limit); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t lo = i > limit ? i - limit : 1;
    const std::size_t hi = std::min(m, i + limit);
    cur[lo - 1] = (lo == 1 && i <= limit) ? i : kInf;
    std::size_t row_min = cur[lo - 1];
    for (std::size_t j = lo; j <= hi; ++j) {
      cur[j] = std::min({prev[j - 1] + (same_folded(a[i - 1], b[j - 1]) ? 0 : 1),
                         prev[j] + 1, cur[j - 1] + 1});
      row_min = std::min(row_min, cur[j]);
    }
    if (hi + 1 <= m) cur[hi + 1] = kInf;
    if (row_min > limit) return std::nullopt;
    std::swap(prev, cur);
  }
  if (prev[m] > limit) return std::nullopt;
  return prev[m];
}

std::vector<SpanMatch> approx_find(std::u32string_view pattern,
                                   std::u32string_view text,
                                   std::size_t budget) {
  if (pattern.empty()) throw std::invalid_argument("approx_find: empty pattern");
  const std::size_t m = pattern.size();
  const std::size_t n = text.size();

  // Forward pass: cheapest cost of any span ending at each position.
  std::vector<std::size_t> col(m + 1);
  std::vector<std::size_t> next(m + 1);
  for (std::size_t i = 0; i <= m; ++i) col[i] = i;
  std::vector<std::size_t> viable_ends;
  for (std::size_t j = 1; j <= n; ++j) {
    next[0] = 0;
    for (std::size_t i = 1; i <= m; ++i) {
      next[i] = std::min({col[i - 1] + (same_folded(pattern[i - 1], text[j - 1]) ? 0 : 1),
                          col[i] + 1, next[i - 1] + 1});
    }
    std::swap(col, next);
    if (col[m] <= budget) viable_ends.push_back(j);
  }

  // Backward pass per viable end enumerates every start within budget.
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> candidates;
  for (std::size_t end : viable_ends) {
    const std::size_t max_len = std::min(end, m + budget);
    for (std::size_t i = 0; i <= m; ++i) col[i] = i;
    for (std::size_t l = 1; l <= max_len; ++l) {
      const char32_t tc = text[end - l];
      next[0] = l;
      std::size_t column_min = next[0];
      for (std::size_t i = 1; i <= m; ++i) {
        next[i] = std::min({col[i - 1] + (same_folded(pattern[m - i], tc) ? 0 : 1),
                            col[i] + 1, next[i - 1] + 1});
        column_min = std::min(column_min, next[i]);
      }
      std::swap(col, next);
      if (col[m] <= budget) candidates.emplace_back(col[m], end - l, end);
      if (column_min > budget) break;
    }
  }

  std::sort(candidates.begin(), candidates.end());
  std::vector<bool> taken(n, false);
  std::vector<SpanMatch> matches;
  for (const auto& [cost, start, end] : candidates) {
    if (std::any_of(taken.begin() + static_cast<std::ptrdiff_t>(start),
                    taken.begin() + static_cast<std::ptrdiff_t>(end),
                    [](bool b) { return b; })) {
      continue;
    }
    std::fill(taken.begin() + static_cast<std::ptrdiff_t>(start),
              taken.begin() + static_cast<std::ptrdiff_t>(end), true);
    matches.push_back(SpanMatch{{0, m}, {start, end}, cost});
  }
  std::sort(matches.begin(), matches.end(),
            [](const SpanMatch& a, const SpanMatch& b) {
              return a.source.start < b.source.start;
            });
  return matches;
}

std::optional<SpanMatch> extend_match(const Document& suspect,
                                      const Document& source,
                                      const SpanMatch& seed,
                                      Direction direction,
                                      std::size_t step_chars,
                                      double edit_ratio) {
  const bool grow_left = direction != Direction::Right;
  const bool grow_right = direction != Direction::Left;
  const std::size_t left = grow_left ? std::min(step_chars, seed.suspect.start) : 0;
  const std::size_t right =
      grow_right ? std::min(step_chars, suspect.length() - seed.suspect.end) : 0;
  if (left == 0 && right == 0) return std::nullopt;

  const CharSpan grown{seed.suspect.start - left, seed.suspect.end + right};
  const std::size_t budget = edit_budget(edit_ratio, grown.length());
  const std::u32string_view source_text = source.text;

  // Cheap witness: keep the seed alignment and attach the new pieces.
  std::size_t witness_cost = seed.edit_cost;
  CharSpan witness_source = seed.source;
  if (left > 0) {
    const auto piece = align_piece(
        suspect.slice({grown.start, seed.suspect.start}), source_text,
        seed.source.start, true, left + budget);
    witness_cost += piece.cost;
    witness_source.start -= piece.consumed;
  }
  if (right > 0) {
    const auto piece = align_piece(
        suspect.slice({seed.suspect.end, grown.end}), source_text,
        seed.source.end, false, right + budget);
    witness_cost += piece.cost;
    witness_source.end += piece.consumed;
  }
  if (witness_cost <= budget) {
    return SpanMatch{grown, witness_source, witness_cost};
  }

  // Exact check: best alignment of the whole grown span inside a window
  // around the seed's source span.
  const std::size_t window_start =
      seed.source.start > left + budget ? seed.source.start - left - budget : 0;
  const std::size_t window_end =
      std::min(source_text.size(), seed.source.end + right + budget);
  const std::u32string_view window =
      source_text.substr(window_start, window_end - window_start);
  const std::size_t expected_start =
      seed.source.start - std::min(seed.source.start, left) - window_start;
  const std::size_t expected_end =
      std::min(source_text.size(), seed.source.end + right) - window_start;
  const SpanMatch best =
      realign(suspect.slice(grown), window, expected_start, expected_end);
  if (best.edit_cost > budget) return std::nullopt;
  return SpanMatch{grown,
                   {window_start + best.source.start,
                    window_start + best.source.end},
                   best.edit_cost};
}

SpanMatch expand_to_fixpoint(const Document& suspect, const Document& source,
                             SpanMatch seed, std::size_t step_chars,
                             double edit_ratio) {
  SpanMatch current = seed;
  for (;;) {
    if (auto grown = extend_match(suspect, source, current, Direction::Both,
                                  step_chars, edit_ratio)) {
      current = *grown;
      continue;
    }
    bool progressed = false;
    if (auto grown = extend_match(suspect, source, current, Direction::Left,
                                  step_chars, edit_ratio)) {
      current = *grown;
      progressed = true;
    }
    if (auto grown = extend_match(suspect, source, current, Direction::Right,
                                  step_chars, edit_ratio)) {
      current = *grown;
      progressed = true;
    }
    if (!progressed) break;
  }
  // Growth steps carry an upper bound; report the true distance.
  if (current.suspect != seed.suspect || current.source != seed.source) {
    current.edit_cost =
        edit_distance(suspect.slice(current.suspect), source.slice(current.source));
  }
  return current;
}

}  // namespace antiplag
