// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "antiplag/detector.hpp"
#include "antiplag/errors.hpp"
#include "antiplag/evalharness.hpp"
#include "antiplag/matcher.hpp"
#include "antiplag/report.hpp"
#include "antiplag/sampler.hpp"
#include "antiplag/searchindex.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace antiplag;
using testing_support::u32;

namespace {

// Collects failure messages for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::size_t cases = 0;

  void expect(bool ok, const std::string& what) {
    ++cases;
    if (!ok && failures.size() < 20) failures.push_back(what);
    if (!ok && failures.size() == 20) failures.push_back("...");
  }
  bool ok() const { return failures.empty(); }
};

int g_failed = 0;

void report(int number, const std::string& title, const Check& check, const std::string& detail) {
  std::cout << (check.ok() ? "PASS" : "FAIL") << " criterion " << number << ": " << title
            << " (" << detail << ")\n";
  for (const auto& f : check.failures) std::cout << "    " << f << '\n';
  std::cout.flush();
  if (!check.ok()) ++g_failed;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::u32string random_text(std::mt19937_64& rng, std::size_t n, std::string_view alphabet) {
  std::u32string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char32_t>(alphabet[rng() % alphabet.size()]));
  return s;
}

struct EvalRun {
  eval::AccuracyReport s6;
  eval::AccuracyReport s8;
  double seconds_s6 = 0.0;
};

EvalRun run_generated_eval(const fs::path& root) {
  using clock = std::chrono::steady_clock;
  eval::TestCorpusSpec spec;  // 48 files, fixed seed
  const auto t0 = clock::now();
  const auto pool = eval::generate_source_pool(spec, spec.rng_seed);
  const auto workspace = eval::build_test_corpus(spec, pool, root);
  EvalRun run;
  EngineConfig config;
  run.s6 = eval::run_evaluation(workspace, config, 1);
  run.seconds_s6 = std::chrono::duration<double>(clock::now() - t0).count();
  config.step_size = 8;
  run.s8 = eval::run_evaluation(workspace, config, 1);
  std::cout << eval::format_accuracy_table({run.s6, run.s8});
  return run;
}

void criterion_1(const EvalRun& run) {
  using eval::Category;
  using eval::EditType;
  Check c;
  const auto& r = run.s6;
  c.expect(r.files.size() == 48, "expected 48 files, got " + std::to_string(r.files.size()));
  for (const auto& f : r.files) c.expect(f.error.empty(), f.id + ": " + f.error);
  c.expect(r.per_category_avg.at(Category::Original) == 100.0,
           "Original accuracy " + fmt(r.per_category_avg.at(Category::Original)));
  for (Category cat : {Category::Web, Category::Mill}) {
    for (EditType type : {EditType::Verbatim, EditType::Edited}) {
      const double v = r.per_cell.at({cat, type});
      c.expect(v == 100.0, std::string(eval::to_string(cat)) + "/" +
                               std::string(eval::to_string(type)) + " " + fmt(v));
    }
    const double syn = r.per_cell.at({cat, EditType::Synonymous});
    c.expect(syn >= 90.0, std::string(eval::to_string(cat)) + "/Synonymous " + fmt(syn));
  }
  c.expect(r.grand_avg >= 90.0, "grand average " + fmt(r.grand_avg));
  c.expect(run.seconds_s6 <= 300.0, "runtime " + fmt(run.seconds_s6) + " s");
  report(1, "generated-corpus accuracy at W=5, S=6", c,
         "grand " + fmt(r.grand_avg) + ", " + fmt(run.seconds_s6) + " s");
}

void criterion_2(const EvalRun& run) {
  Check c;
  c.expect(run.s6.grand_avg >= run.s8.grand_avg,
           "S=6 " + fmt(run.s6.grand_avg) + " < S=8 " + fmt(run.s8.grand_avg));
  report(2, "step-size monotonicity", c,
         "S=6 " + fmt(run.s6.grand_avg) + " vs S=8 " + fmt(run.s8.grand_avg));
}

void criterion_3() {
  Check find_check;
  std::mt19937_64 rng(3003);
  for (int trial = 0; trial < 800; ++trial) {
    const std::string_view alphabet = trial % 3 == 0 ? "ab" : (trial % 3 == 1 ? "abcd " : "aAbBc, ");
    const auto text = random_text(rng, rng() % 61, alphabet);
    std::u32string pattern;
    if (!text.empty() && rng() % 2) {
      pattern = text.substr(rng() % text.size(), 1 + rng() % 10);
    } else {
      pattern = random_text(rng, 1 + rng() % 10, alphabet);
    }
    const std::size_t budget = rng() % 5;
    const bool same = approx_find(pattern, text, budget) ==
                      testing_support::brute_force_find(pattern, text, budget);
    find_check.expect(same, "approx_find '" + encode_utf8(pattern) + "' in '" +
                                encode_utf8(text) + "' budget " + std::to_string(budget));
  }
  Check dist_check;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_text(rng, rng() % 40, "abcAB ");
    const auto b = random_text(rng, rng() % 40, "abcAB ");
    const std::size_t expected = testing_support::naive_distance(a, b);
    dist_check.expect(edit_distance(a, b) == expected,
                      "edit_distance '" + encode_utf8(a) + "' '" + encode_utf8(b) + "'");
  }
  Check c;
  c.failures = find_check.failures;
  c.failures.insert(c.failures.end(), dist_check.failures.begin(), dist_check.failures.end());
  report(3, "matcher oracle suite", c,
         std::to_string(find_check.cases) + " approx_find cases, " +
             std::to_string(dist_check.cases) + " distance pairs");
}

void criterion_4() {
  Check c;
  std::mt19937_64 rng(4004);
  const std::vector<std::string> vocab = {"red", "Red", "blue", "green", "red,", "sky.",
                                          "the", "The", "of", "a", "über", "ÜBER"};
  std::size_t nonempty = 0;
  for (int round = 0; round < 50; ++round) {
    std::vector<PhraseIndex::DocumentPtr> corpus;
    const std::size_t docs = 1 + rng() % 5;
    for (std::size_t d = 0; d < docs; ++d) {
      corpus.push_back(std::make_shared<const Document>(ingest_plain_text(
          testing_support::random_words(rng, 1 + rng() % 40, vocab), "doc" + std::to_string(d),
          Origin::LocalCorpus, "corpus/doc" + std::to_string(d) + ".txt")));
    }
    const auto index = build_index(corpus, 1 + rng() % 3);
    for (int q = 0; q < 20; ++q) {
      std::u32string phrase;
      const Document& d = *corpus[rng() % corpus.size()];
      if (rng() % 2 == 0) {
        const std::size_t len = 1 + rng() % std::min<std::size_t>(6, d.tokens.size());
        const std::size_t start = rng() % (d.tokens.size() - len + 1);
        for (std::size_t k = 0; k < len; ++k) {
          if (k) phrase += U' ';
          phrase += d.tokens[start + k].surface;
        }
      } else {
        phrase = u32(testing_support::random_words(rng, 1 + rng() % 6, vocab));
      }
      const auto expected = testing_support::linear_scan(corpus, phrase);
      nonempty += expected.empty() ? 0 : 1;
      c.expect(index->phrase_search(phrase) == expected,
               "phrase '" + encode_utf8(phrase) + "' round " + std::to_string(round));
    }
  }
  report(4, "phrase-index oracle suite", c,
         std::to_string(c.cases) + " queries, " + std::to_string(nonempty) + " with hits");
}

MatchArea area(std::size_t start, std::size_t end) {
  MatchArea a;
  a.suspect_span = {start, end};
  a.sources["A"] = SpanMatch{{start, end}, {start, end}, 0};
  return a;
}

void criterion_5() {
  Check c;
  const EngineConfig config;
  const Document hundred = ingest_plain_text(std::string(100, 'x'), "s");
  const auto r = score(hundred, {area(10, 35)}, config);
  c.expect(r.percent_plagiarized == 0.25 && r.alert, "25.0% coverage must alert");

  const auto kept = filter_results({area(0, 50)}, config);
  c.expect(kept.size() == 1 && kept[0].sources.contains("A"), "50-char area must be kept");
  c.expect(filter_results({area(0, 49)}, config).empty(), "49-char area must be removed");

  // Five words spanning exactly 40 characters.
  const Document forty = ingest_plain_text("abcdefg abcdefg abcdefg abcdefg abcdefgh", "q");
  const auto queries = generate_queries(forty, config);
  c.expect(queries.size() == 1 && queries[0].span().length() == 40,
           "expected one 40-char query");
  if (!queries.empty()) {
    c.expect(query_edit_budget(queries[0], config) == 2, "40-char query budget must be 2");
  }
  c.expect(edit_budget(0.05, 40) == 2, "edit_budget(0.05, 40) must be 2");

  EngineConfig fig;
  fig.window_size = 3;
  fig.step_size = 4;
  const Document seven = ingest_plain_text("t1 t2 t3 t4 t5 t6 t7", "f");
  const auto fq = generate_queries(seven, fig);
  c.expect(fq.size() == 2, "expected two queries for 7 tokens, W=3, S=4");
  if (fq.size() == 2) {
    c.expect(encode_utf8(fq[0].phrase) == "t1 t2 t3", "first query " + encode_utf8(fq[0].phrase));
    c.expect(encode_utf8(fq[1].phrase) == "t5 t6 t7", "second query " + encode_utf8(fq[1].phrase));
  }
  report(5, "boundary cases", c, std::to_string(c.cases) + " checks");
}

// Generates a workspace, runs detection through the sampling provider and
// returns the results JSON with environment-dependent fields fixed.
std::string pipeline_run(const eval::TestCorpusSpec& spec, const fs::path& root, Check& c) {
  const auto pool = eval::generate_source_pool(spec, spec.rng_seed);
  const auto workspace = eval::build_test_corpus(spec, pool, root);
  const EngineConfig config;
  const auto index = build_index(load_corpus(workspace.corpus_dir(), Origin::SampledWeb),
                                 config.index_gram_width());
  LocalProvider provider(index, "web");
  SampledSourceStore store(workspace.sampled_dir(), provider.name());
  DetectionContext context;
  context.provider = &provider;
  context.store = &store;

  std::vector<DocumentPtr> suspects;
  for (const auto& f : workspace.files) {
    suspects.push_back(std::make_shared<const Document>(
        ingest_file((root / f.path).string(), Origin::Suspect, f.id)));
  }
  ReportBundle bundle;
  bundle.generated_at = "fixed";
  bundle.workspace = "ws";
  for (std::size_t i = 0; i < suspects.size(); ++i) {
    const Document& s = *suspects[i];
    const DetectionResult r = detect(s, config, context);
    const std::string tag = s.id + ": ";
    std::size_t covered = 0;
    for (std::size_t k = 0; k < r.areas.size(); ++k) {
      const MatchArea& a = r.areas[k];
      c.expect(!a.suspect_span.empty() && a.suspect_span.end <= r.text_length,
               tag + "area out of range");
      if (k > 0) {
        c.expect(!r.areas[k - 1].suspect_span.overlaps(a.suspect_span) &&
                     r.areas[k - 1].suspect_span.end <= a.suspect_span.start,
                 tag + "areas overlap or are unordered");
      }
      covered += a.suspect_span.length();
      for (const auto& [id, m] : a.sources) {
        const auto src = index->find_document(id);
        c.expect(src != nullptr, tag + "unknown source " + id);
        if (!src) continue;
        c.expect(a.suspect_span.contains(m.suspect), tag + "span outside its area");
        const std::size_t d = testing_support::naive_distance(s.slice(m.suspect),
                                                              src->slice(m.source));
        c.expect(d == m.edit_cost, tag + "recorded edit cost " + std::to_string(m.edit_cost) + " but recomputed " +
                     std::to_string(d) + " over " + std::to_string(m.suspect.length()) + " chars");
        c.expect(d <= edit_budget(config.edit_ratio, m.suspect.length()),
                 tag + "span exceeds its edit budget");
      }
    }
    c.expect(covered == r.covered_chars, tag + "covered chars mismatch");
    c.expect(r.percent_plagiarized >= 0.0 && r.percent_plagiarized <= 1.0,
             tag + "percent out of range");
    bundle.texts[r.suspect_id] = s.utf8_text();
    bundle.results.push_back(r);
  }
  validate(bundle);
  return bundle_to_json(bundle).dump(1);
}

void criterion_6(const fs::path& scratch) {
  Check c;
  std::mt19937_64 rng(6006);
  std::size_t workspaces = 0;
  for (int round = 0; round < 4; ++round) {
    eval::TestCorpusSpec spec;
    spec.files_per_cell = 1 + rng() % 2;
    spec.sentences_per_file = 5 * (1 + rng() % 3);
    spec.rng_seed = rng();
    const fs::path root = scratch / ("run" + std::to_string(round));
    const std::string first = pipeline_run(spec, root, c);
    fs::remove_all(root);
    const std::string second = pipeline_run(spec, root, c);
    c.expect(first == second, "rerun differs for seed " + std::to_string(spec.rng_seed));
    ++workspaces;
  }
  report(6, "pipeline invariants", c,
         std::to_string(workspaces) + " workspaces, " + std::to_string(c.cases) + " checks");
}

void criterion_7() {
  Check c;
  for (std::size_t w = 1; w <= 12; ++w) {
    for (std::size_t s = 1; s <= 12; ++s) {
      for (std::size_t t = w; t <= 60; ++t) {
        std::size_t enumerated = 0;
        for (std::size_t start = 0; start + w <= t; start += s) ++enumerated;
        const std::size_t formula = (t - w) / s + 1;
        c.expect(expected_query_count(t, w, s) == enumerated && formula == enumerated,
                 "T=" + std::to_string(t) + " W=" + std::to_string(w) + " S=" + std::to_string(s));
        if (t > 30 || w > 4) continue;
        // The generator itself, on a real document.
        std::string text;
        for (std::size_t k = 0; k < t; ++k) text += "w" + std::to_string(k) + " ";
        EngineConfig config;
        config.window_size = w;
        config.step_size = s;
        const auto queries = generate_queries(ingest_plain_text(text, "t"), config);
        c.expect(queries.size() == enumerated, "generate_queries T=" + std::to_string(t) +
                                                   " W=" + std::to_string(w) +
                                                   " S=" + std::to_string(s));
      }
    }
  }
  report(7, "query-count formula", c, std::to_string(c.cases) + " checks");
}

}  // namespace

int main() {
  testing_support::TempDir scratch;
  auto guarded = [](int number, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      std::cout << "FAIL criterion " << number << ": threw " << e.what() << '\n';
      ++g_failed;
    }
  };
  std::optional<EvalRun> run;
  try {
    run = run_generated_eval(scratch.path() / "eval");
  } catch (const std::exception& e) {
    std::cout << "FAIL criterion 1: evaluation threw " << e.what() << '\n';
    std::cout << "FAIL criterion 2: evaluation threw " << e.what() << '\n';
    g_failed += 2;
  }
  if (run) {
    guarded(1, [&] { criterion_1(*run); });
    guarded(2, [&] { criterion_2(*run); });
  }
  guarded(3, criterion_3);
  guarded(4, criterion_4);
  guarded(5, criterion_5);
  guarded(6, [&] { criterion_6(scratch.path() / "pipeline"); });
  guarded(7, criterion_7);
  std::cout << (g_failed == 0 ? "ALL CRITERIA PASS" : std::to_string(g_failed) + " CRITERIA FAILED")
            << '\n';
  return g_failed == 0 ? 0 : 1;
}
