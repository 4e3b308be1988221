#pragma once

#include <algorithm>
#include <atomic>
#include <unistd.h>
#include <cstddef>
#include <filesystem>
#include <random>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "antiplag/matcher.hpp"
#include "antiplag/searchindex.hpp"
#include "antiplag/textmodel.hpp"
#include "antiplag/unicode.hpp"

namespace testing_support {

inline std::u32string u32(std::string_view s) { return antiplag::decode_utf8(s); }

// Plain quadratic Levenshtein table, the reference for every distance check.
inline std::size_t naive_distance(std::u32string_view a, std::u32string_view b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1,
                                          std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub =
          d[i - 1][j - 1] + (antiplag::same_folded(a[i - 1], b[j - 1]) ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[a.size()][b.size()];
}

// Enumerates every non-empty text span, keeps those within budget, then
// selects greedily by (cost, start, end) without overlap.
inline std::vector<antiplag::SpanMatch> brute_force_find(std::u32string_view pattern,
                                                         std::u32string_view text,
                                                         std::size_t budget) {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> all;
  for (std::size_t s = 0; s < text.size(); ++s) {
    for (std::size_t e = s + 1; e <= text.size(); ++e) {
      const std::size_t d = naive_distance(pattern, text.substr(s, e - s));
      if (d <= budget) all.emplace_back(d, s, e);
    }
  }
  std::sort(all.begin(), all.end());
  std::vector<antiplag::SpanMatch> kept;
  for (const auto& [d, s, e] : all) {
    bool clash = false;
    for (const auto& k : kept) clash = clash || (s < k.source.end && k.source.start < e);
    if (!clash) kept.push_back({{0, pattern.size()}, {s, e}, d});
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.source.start < b.source.start;
  });
  return kept;
}

inline std::string random_string(std::mt19937_64& rng, std::size_t length,
                                 std::string_view alphabet) {
  std::string s;
  for (std::size_t i = 0; i < length; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
  return s;
}

inline std::string random_words(std::mt19937_64& rng, std::size_t count,
                                const std::vector<std::string>& vocab) {
  std::string s;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) s.push_back(' ');
    s += vocab[rng() % vocab.size()];
  }
  return s;
}

inline antiplag::Document doc(std::string_view text, std::string id = "d",
                              antiplag::Origin origin = antiplag::Origin::Suspect) {
  return antiplag::ingest_plain_text(text, std::move(id), origin);
}

// Every (document, token position) where the phrase's tokens follow one
// another, compared case-insensitively; sorted by id then offset.
inline std::vector<antiplag::SearchHit> linear_scan(
    const std::vector<std::shared_ptr<const antiplag::Document>>& corpus,
    std::u32string_view phrase) {
  std::vector<std::u32string> words;
  std::u32string current;
  for (char32_t c : phrase) {
    if (c == U' ') {
      if (!current.empty()) words.push_back(antiplag::fold_case(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) words.push_back(antiplag::fold_case(current));
  std::vector<antiplag::SearchHit> hits;
  for (const auto& d : corpus) {
    for (std::size_t p = 0; p + words.size() <= d->tokens.size(); ++p) {
      bool same = true;
      for (std::size_t k = 0; k < words.size() && same; ++k) {
        same = antiplag::fold_case(d->tokens[p + k].surface) == words[k];
      }
      if (same) {
        hits.push_back({d->id, d->source_uri,
                        antiplag::CharSpan{d->tokens[p].start,
                                           d->tokens[p + words.size() - 1].end}});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source_id, a.span->start) < std::tie(b.source_id, b.span->start);
  });
  return hits;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("antiplag-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
