#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "antiplag/cli.hpp"
#include "antiplag/report.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using antiplag::cli::run;

namespace {

struct Captured {
  int code = -1;
  std::string out;
  std::string err;
};

Captured invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Captured c;
  c.code = run(args, out, err);
  c.out = out.str();
  c.err = err.str();
  return c;
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

const std::string kSource =
    "The quiet engineer carried an old lantern across the northern bridge before dawn, "
    "while the river below kept rising against the stones of the ancient mill. "
    "Nobody in the village had expected the flood to arrive so early in the spring, "
    "and the farmers gathered their animals on the hill above the church.";

const std::string kOwn =
    "My essay discusses several reasons why public libraries deserve stable funding "
    "and how volunteers keep reading programs alive in small towns.";

struct Fixture {
  testing_support::TempDir dir;
  fs::path corpus = dir.path() / "corpus";
  fs::path suspects = dir.path() / "suspects";
  Fixture() {
    write(corpus / "source.txt", kSource);
    write(suspects / "copy.txt", kOwn + " " + kSource);
    write(suspects / "own.txt", kOwn);
  }
};

}  // namespace

TEST(Cli, HelpExitsZero) {
  const Captured c = invoke({"detect", "--help"});
  EXPECT_EQ(c.code, 0);
  EXPECT_NE(c.out.find("--suspects"), std::string::npos);
  EXPECT_NE(c.out.find("--min-area-chars"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({"detect", "--suspects", "x", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"detect"}).code, 2);
  Fixture f;
  EXPECT_EQ(invoke({"detect", "--suspects", f.suspects.string(), "-S", "0",
                    "--workspace", f.dir.path().string()})
                .code,
            2);
  EXPECT_EQ(invoke({"detect", "--suspects", f.suspects.string(), "--provider", "google",
                    "--workspace", f.dir.path().string()})
                .code,
            2);
}

TEST(Cli, DefaultsShownInHelp) {
  const Captured c = invoke({"detect", "--help"});
  EXPECT_NE(c.out.find("[5]"), std::string::npos);
  EXPECT_NE(c.out.find("[6]"), std::string::npos);
  EXPECT_NE(c.out.find("[0.05]"), std::string::npos);
  EXPECT_NE(c.out.find("[50]"), std::string::npos);
  EXPECT_NE(c.out.find("[0.25]"), std::string::npos);
}

TEST(Cli, IndexPrintsStats) {
  Fixture f;
  const Captured c = invoke({"index", f.corpus.string()});
  ASSERT_EQ(c.code, 0) << c.err;
  const auto stats = nlohmann::json::parse(c.out);
  EXPECT_EQ(stats.at("documents"), 1);
  EXPECT_EQ(stats.at("gram_width"), 3);
  EXPECT_GT(stats.at("postings").get<int>(), 0);
}

TEST(Cli, DetectAlertExitsThree) {
  Fixture f;
  const fs::path ws = f.dir.path();
  const Captured c = invoke({"detect", "--suspects", f.suspects.string(), "--workspace",
                             ws.string(), "--provider", "local:" + f.corpus.string()});
  EXPECT_EQ(c.code, 3) << c.err;
  EXPECT_NE(c.out.find("ALERT  copy"), std::string::npos) << c.out;
  EXPECT_NE(c.out.find("0.0%  ok     own"), std::string::npos) << c.out;
  EXPECT_TRUE(fs::exists(ws / "results.json"));
  EXPECT_TRUE(fs::exists(ws / "report" / "index.html"));
  EXPECT_TRUE(fs::exists(ws / "report" / "doc-copy.html"));
  EXPECT_FALSE(fs::is_empty(ws / "sampled"));

  const auto bundle = antiplag::read_report(ws / "results.json");
  ASSERT_EQ(bundle.results.size(), 2u);
  EXPECT_TRUE(bundle.results[0].alert);
  EXPECT_FALSE(bundle.results[1].alert);
}

TEST(Cli, DetectCleanExitsZero) {
  Fixture f;
  fs::remove(f.suspects / "copy.txt");
  const Captured c = invoke({"detect", "--suspects", f.suspects.string(), "--workspace",
                             f.dir.path().string()});
  EXPECT_EQ(c.code, 0) << c.err;
}

TEST(Cli, HermeticCorpus) {
  Fixture f;
  const Captured c = invoke({"detect", "--suspects", f.suspects.string(), "--corpus",
                             f.corpus.string(), "--workspace", f.dir.path().string()});
  EXPECT_EQ(c.code, 3) << c.err;
  EXPECT_FALSE(fs::exists(f.dir.path() / "sampled"));
  EXPECT_EQ(invoke({"detect", "--suspects", f.suspects.string(), "--corpus",
                    f.corpus.string(), "--provider", "local:" + f.corpus.string()})
                .code,
            2);
}

TEST(Cli, DocumentErrorExitsOne) {
  Fixture f;
  write(f.suspects / "blank.txt", "   \n\t ");
  const Captured c = invoke({"detect", "--suspects", f.suspects.string(), "--workspace",
                             f.dir.path().string()});
  EXPECT_EQ(c.code, 1);
  EXPECT_NE(c.err.find("blank"), std::string::npos);
  // The other suspects are still reported.
  EXPECT_EQ(antiplag::read_report(f.dir.path() / "results.json").results.size(), 2u);

  EXPECT_EQ(invoke({"detect", "--suspects", (f.dir.path() / "nope").string(), "--workspace",
                    f.dir.path().string()})
                .code,
            1);
}

TEST(Cli, WorkspaceFromEnvironment) {
  Fixture f;
  const fs::path ws = f.dir.path() / "envws";
  write(ws / "corpus" / "source.txt", kSource);
  ::setenv("ANTIPLAG_WORKSPACE", ws.string().c_str(), 1);
  const Captured c = invoke({"detect", "--suspects", f.suspects.string()});
  ::unsetenv("ANTIPLAG_WORKSPACE");
  EXPECT_EQ(c.code, 3) << c.err;
  EXPECT_TRUE(fs::exists(ws / "results.json"));
}

TEST(Cli, ReportRerendersHtml) {
  Fixture f;
  invoke({"detect", "--suspects", f.suspects.string(), "--workspace", f.dir.path().string()});
  const fs::path html = f.dir.path() / "again";
  const Captured c = invoke({"report", (f.dir.path() / "results.json").string(), "--html",
                             html.string()});
  EXPECT_EQ(c.code, 0) << c.err;
  EXPECT_TRUE(fs::exists(html / "index.html"));
  EXPECT_TRUE(fs::exists(html / "doc-own.html"));
  EXPECT_EQ(invoke({"report", (f.dir.path() / "missing.json").string()}).code, 1);
}

TEST(Cli, EvalSmallSpec) {
  testing_support::TempDir dir;
  write(dir.path() / "spec.json",
        R"({"files_per_cell": 1, "sentences_per_file": 10, "rng_seed": 7})");
  const fs::path ws = dir.path() / "ws";
  const Captured c = invoke({"eval", "--spec", (dir.path() / "spec.json").string(),
                             "--workspace", ws.string(), "--steps", "6,8"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("S = 6"), std::string::npos) << c.out;
  EXPECT_NE(c.out.find("S = 8"), std::string::npos);
  const fs::path report = ws / "eval-report.json";
  ASSERT_TRUE(fs::exists(report));
  std::ifstream in(report);
  const auto json = nlohmann::json::parse(in);
  ASSERT_EQ(json.at("reports").size(), 2u);
  EXPECT_EQ(json.at("spec").at("rng_seed"), 7);
  EXPECT_EQ(invoke({"eval", "--spec", (dir.path() / "missing.json").string(), "--workspace",
                    ws.string()})
                .code,
            1);
  write(dir.path() / "bad.json", R"({"files_per_cell": "many"})");
  EXPECT_EQ(invoke({"eval", "--spec", (dir.path() / "bad.json").string(), "--workspace",
                    ws.string()})
                .code,
            2);
}
