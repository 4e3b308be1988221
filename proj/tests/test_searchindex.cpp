#include <fstream>
#include <set>
#include <thread>

#include <gtest/gtest.h>
#include <json.hpp>

#include "antiplag/errors.hpp"
#include "antiplag/searchindex.hpp"
#include "support.hpp"

using namespace antiplag;
using testing_support::u32;

namespace {

using Corpus = std::vector<PhraseIndex::DocumentPtr>;

PhraseIndex::DocumentPtr make(std::string text, std::string id) {
  return std::make_shared<const Document>(
      ingest_plain_text(text, id, Origin::LocalCorpus, "corpus/" + id + ".txt"));
}

Corpus random_corpus(std::mt19937_64& rng, std::size_t docs,
                     const std::vector<std::string>& vocab) {
  Corpus corpus;
  for (std::size_t i = 0; i < docs; ++i) {
    corpus.push_back(make(testing_support::random_words(rng, 1 + rng() % 40, vocab),
                          "doc" + std::to_string(i)));
  }
  return corpus;
}

class FixedProvider final : public SearchProvider {
 public:
  std::string name() const override { return "fixed"; }
  std::vector<SearchHit> search(std::u32string_view, std::size_t) const override {
    return {{"a", "u", std::nullopt}, {"b", "u", std::nullopt}, {"c", "u", std::nullopt}};
  }
  Document fetch(const SearchHit&) const override { throw ProviderUnavailable("down"); }
};

}  // namespace

TEST(BuildIndex, EmptyCorpusAnswersNothing) {
  const auto index = build_index({}, 3);
  EXPECT_EQ(index->document_count(), 0u);
  EXPECT_TRUE(index->phrase_search(U"anything at all").empty());
  EXPECT_TRUE(index->phrase_search(U"x").empty());
}

TEST(BuildIndex, BigramPostingsOfSmallDocument) {
  const auto index = build_index({make("a b c", "d")}, 2);
  const auto dump = index->dump_postings();
  ASSERT_EQ(dump.size(), 2u);
  EXPECT_EQ(dump.at(U"a b"), (std::vector<PhraseIndex::Posting>{{0, 0}}));
  EXPECT_EQ(dump.at(U"b c"), (std::vector<PhraseIndex::Posting>{{0, 1}}));
  EXPECT_THROW(build_index({}, 0), ConfigError);
}

TEST(BuildIndex, EveryPostingVerifiedByDirectScan) {
  std::mt19937_64 rng(42);
  const std::vector<std::string> vocab = {"red", "Green", "blue", "cyan", "red,", "ox"};
  const Corpus corpus = random_corpus(rng, 50, vocab);
  for (std::size_t width = 1; width <= 4; ++width) {
    const auto index = build_index(corpus, width);
    std::size_t expected_total = 0;
    for (const auto& d : corpus) {
      if (d->tokens.size() >= width) expected_total += d->tokens.size() - width + 1;
    }
    EXPECT_EQ(index->posting_count(), expected_total);
    for (const auto& [gram, postings] : index->dump_postings()) {
      for (const auto& p : postings) {
        const Document& d = *corpus[p.doc];
        std::u32string actual;
        for (std::size_t k = 0; k < width; ++k) {
          if (k) actual += U' ';
          actual += fold_case(d.tokens[p.position + k].surface);
        }
        EXPECT_EQ(actual, gram);
      }
    }
  }
}

TEST(BuildIndex, RebuildIsIdentical) {
  std::mt19937_64 rng(1);
  const Corpus corpus = random_corpus(rng, 20, {"a", "b", "c"});
  EXPECT_EQ(build_index(corpus, 3)->dump_postings(), build_index(corpus, 3)->dump_postings());
}

TEST(PhraseSearch, VerbatimPhraseFoundWithOffsets) {
  const auto index = build_index(
      {make("One fine day the old river flooded the valley.", "a"),
       make("Nothing relevant here at all.", "b")},
      3);
  const auto hits = index->phrase_search(U"the OLD river flooded");
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].source_id, "a");
  EXPECT_EQ(hits[0].source_uri, "corpus/a.txt");
  ASSERT_TRUE(hits[0].span);
  EXPECT_EQ(hits[0].span->start, 13u);
  EXPECT_EQ(hits[0].span->end, 34u);
  EXPECT_TRUE(index->phrase_search(U"the young river flooded").empty());
  EXPECT_THROW(index->phrase_search(U"   "), QueryRejected);
}

TEST(PhraseSearch, AgreesWithLinearScanOnRandomCorpora) {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> vocab = {"a", "b", "c", "A", "d", "b.", "é", "É"};
  std::size_t nonempty = 0;
  for (int round = 0; round < 20; ++round) {
    const Corpus corpus = random_corpus(rng, 1 + rng() % 12, vocab);
    const auto index = build_index(corpus, 1 + rng() % 3);
    for (int q = 0; q < 50; ++q) {
      std::u32string phrase;
      if (rng() % 2 == 0) {
        // Copy a window from a corpus document so that hits are common.
        const Document& d = *corpus[rng() % corpus.size()];
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
      const auto actual = index->phrase_search(phrase);
      EXPECT_EQ(actual, expected) << encode_utf8(phrase);
      nonempty += expected.empty() ? 0 : 1;
      for (const SearchHit& hit : actual) {
        const auto d = index->find_document(hit.source_id);
        ASSERT_TRUE(d);
        ASSERT_LE(hit.span->end, d->length());
        EXPECT_EQ(fold_case(d->slice(*hit.span)), fold_case(phrase));
      }
    }
  }
  EXPECT_GT(nonempty, 400u);
}

TEST(ProviderSearch, DelegatesAndTruncates) {
  Corpus corpus;
  for (int i = 0; i < 5; ++i) {
    corpus.push_back(make("intro words then the planted phrase here", "d" + std::to_string(i)));
  }
  LocalProvider provider(build_index(corpus, 3));
  const auto all = build_index(corpus, 3)->phrase_search(U"the planted phrase");
  ASSERT_EQ(all.size(), 5u);
  const auto hits = provider_search(provider, U"the planted phrase", 3);
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits, std::vector<SearchHit>(all.begin(), all.begin() + 3));
  EXPECT_EQ(provider_search(provider, U"the planted phrase", 3), hits);
  EXPECT_THROW(provider_search(provider, U"", 3), QueryRejected);
  EXPECT_THROW(provider_search(provider, U"x", 0), QueryRejected);
}

TEST(ProviderSearch, EmptyProviderAndRemoteLikeProvider) {
  LocalProvider empty(build_index({}, 3));
  EXPECT_TRUE(provider_search(empty, U"a b c d e", 10).empty());
  FixedProvider fixed;
  EXPECT_EQ(provider_search(fixed, U"q", 2).size(), 2u);
}

TEST(LocalProvider, FetchReturnsSampledCopy) {
  LocalProvider provider(build_index({make("alpha beta", "a")}, 3));
  const Document d = provider.fetch({"a", "corpus/a.txt", std::nullopt});
  EXPECT_EQ(d.origin, Origin::SampledWeb);
  EXPECT_EQ(d.utf8_text(), "alpha beta");
  EXPECT_THROW(provider.fetch({"zzz", "", std::nullopt}), ProviderUnavailable);
}

TEST(LoadCorpus, RecursiveSortedIdsAndSkipsEmpty) {
  testing_support::TempDir dir;
  std::filesystem::create_directories(dir.path() / "sub");
  std::ofstream(dir.path() / "b.txt") << "second doc";
  std::ofstream(dir.path() / "a.html") << "<p>first</p>";
  std::ofstream(dir.path() / "sub" / "c.txt") << "third";
  std::ofstream(dir.path() / "empty.txt") << "  ";
  std::ofstream(dir.path() / "notes.md") << "ignored";
  const auto corpus = load_corpus(dir.path());
  std::vector<std::string> ids;
  for (const auto& d : corpus) ids.push_back(d->id);
  EXPECT_EQ(ids, (std::vector<std::string>{"a", "b", "sub/c"}));
  EXPECT_THROW(load_corpus(dir.path() / "missing"), IoFailure);
}

TEST(SampledStore, IdempotentStoreAndRoundTrip) {
  testing_support::TempDir dir;
  SampledSourceStore store(dir.path() / "sampled", "web");
  const Document src = ingest_plain_text("Caf\xc3\xa9  text\nwith lines", "s1",
                                         Origin::SampledWeb, "http://example.org/s1");
  const std::string id1 = store_sampled_source(store, src);
  const std::string id2 = store_sampled_source(store, src);
  EXPECT_EQ(id1, id2);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path() / "sampled" / "web")) {
    files += e.path().extension() == ".txt" ? 1 : 0;
  }
  EXPECT_EQ(files, 1u);
  const Document back = store.load(id1);
  EXPECT_EQ(back.text, src.text);
  EXPECT_EQ(back.tokens, src.tokens);
  EXPECT_EQ(store.relative_path_for(id1), "sampled/web/" + id1 + ".txt");

  const Document other = ingest_plain_text("different", "s2", Origin::SampledWeb,
                                           "http://example.org/s2");
  EXPECT_NE(store.store(other), id1);
  EXPECT_EQ(store.manifest().size(), 2u);

  std::ifstream in(dir.path() / "sampled" / "manifest.json");
  const auto json = nlohmann::json::parse(in);
  ASSERT_TRUE(json.is_array());
  ASSERT_EQ(json.size(), 2u);
  for (const auto& entry : json) {
    EXPECT_TRUE(entry.contains("uri"));
    EXPECT_TRUE(entry.contains("id"));
    EXPECT_EQ(entry.at("sha256").get<std::string>().size(), 64u);
    EXPECT_TRUE(entry.contains("fetched_at"));
  }

  SampledSourceStore reopened(dir.path() / "sampled", "web");
  EXPECT_EQ(reopened.manifest(), store.manifest());
  EXPECT_EQ(reopened.entry_for_uri("http://example.org/s1")->id, id1);
  EXPECT_THROW(reopened.load("0000000000000000"), StorageFailure);
}

TEST(SampledStore, ConcurrentStoresOfDistinctSources) {
  testing_support::TempDir dir;
  SampledSourceStore store(dir.path() / "sampled", "web");
  {
    std::vector<std::jthread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&, t] {
        for (int i = 0; i < 10; ++i) {
          const std::string id = std::to_string(t) + "-" + std::to_string(i);
          store.store(ingest_plain_text("text " + id, id, Origin::SampledWeb, "u/" + id));
        }
      });
    }
  }
  EXPECT_EQ(store.manifest().size(), 40u);
  SampledSourceStore reopened(dir.path() / "sampled", "web");
  EXPECT_EQ(reopened.manifest().size(), 40u);
}

TEST(Timestamp, HonorsSourceDateEpoch) {
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  EXPECT_EQ(current_timestamp(), "1970-01-01T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
}
