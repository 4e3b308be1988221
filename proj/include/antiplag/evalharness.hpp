#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "antiplag/sampler.hpp"
#include "antiplag/textmodel.hpp"

namespace antiplag::eval {

enum class Category { Original, Web, Mill };
enum class EditType { Verbatim, Edited, Synonymous, Paraphrased };

std::string_view to_string(Category category);
std::string_view to_string(EditType type);
Category parse_category(std::string_view text);
EditType parse_edit_type(std::string_view text);

using Rng = std::mt19937_64;
using Lexicon = std::map<std::string, std::vector<std::string>>;

/// Word-list format: one `word: synonym, synonym` entry per line; `#` starts
/// a comment. Keys are lowercased; synonyms must be single words.
Lexicon parse_lexicon(std::string_view text);
Lexicon load_lexicon(const std::filesystem::path& path);
/// The lexicon matching the built-in sentence generator's vocabulary.
const Lexicon& default_lexicon();
std::string format_lexicon(const Lexicon& lexicon);

struct TestCorpusSpec {
  std::vector<Category> categories{Category::Original, Category::Web,
                                   Category::Mill};
  std::vector<EditType> edit_types{EditType::Verbatim, EditType::Edited,
                                   EditType::Synonymous, EditType::Paraphrased};
  std::size_t files_per_cell = 4;
  std::size_t sentences_per_file = 25;
  // Consecutive source sentences copied together into a suspect file.
  std::size_t block_sentences = 5;
  std::uint64_t rng_seed = 2009;
  Lexicon synonym_lexicon = default_lexicon();

  std::size_t cell_count() const { return categories.size() * edit_types.size(); }
  std::size_t total_files() const { return cell_count() * files_per_cell; }
  std::size_t total_sentences() const { return total_files() * sentences_per_file; }
  std::size_t sentences_per_category() const {
    return edit_types.size() * files_per_cell * sentences_per_file;
  }
  void validate() const;
};

/// Reads a spec mirroring TestCorpusSpec. `synonym_lexicon` may be an inline
/// object or a path to a word-list file (relative to `base_dir`).
TestCorpusSpec spec_from_json(const nlohmann::json& json,
                              const std::filesystem::path& base_dir = {});
nlohmann::json spec_to_json(const TestCorpusSpec& spec);

// Single-edit primitives used by transform_edited.
std::string insert_space(std::string_view sentence, std::size_t position);
std::string substitute_char(std::string_view sentence, std::size_t position,
                            char replacement);
std::string add_comma_after_word(std::string_view sentence, std::size_t word);
std::string remove_comma(std::string_view sentence, std::size_t position);
std::string exclaim(std::string_view sentence);
/// Moves words [pivot, n) in front of words [0, pivot), carrying the terminal
/// punctuation and leading capital along.
std::string rotate_words(std::string_view sentence, std::size_t pivot);

/// One to three minor edits: an added space, a changed letter, a comma
/// added or removed, a final period turned into '!'.
std::string transform_edited(std::string_view sentence, Rng& rng);

struct SynonymResult {
  std::string text;
  std::size_t replaced = 0;
  bool unchanged() const { return replaced == 0; }
};

/// Replaces one or two lexicon words. Sentences without any lexicon word are
/// returned unchanged (replaced == 0).
SynonymResult transform_synonymous(std::string_view sentence,
                                   const Lexicon& lexicon, Rng& rng);

/// Reorders word groups, then applies the edited and synonymous changes.
/// Throws SentenceTooShort for fewer than four words.
std::string transform_paraphrased(std::string_view sentence,
                                  const Lexicon& lexicon, Rng& rng);

std::string transform(EditType type, std::string_view sentence,
                      const Lexicon& lexicon, Rng& rng);

/// A source document split into sentences, tagged with the category that
/// may draw from it. Original sources are withheld from every index.
struct SourceText {
  std::string id;
  Category category = Category::Web;
  std::vector<std::string> sentences;

  std::string text() const;
};

struct SourcePool {
  std::vector<SourceText> documents;
};

std::vector<std::string> split_sentences(std::string_view text);
SourceText source_from_document(const Document& doc, Category category);

/// Synthetic English-like source texts, deterministic in `seed`. Sized so
/// that `spec` can be drawn with room to spare.
SourcePool generate_source_pool(const TestCorpusSpec& spec, std::uint64_t seed);

struct WorkspaceFile {
  std::string id;
  std::string path;  // relative to the workspace root
  Category category = Category::Original;
  EditType edit_type = EditType::Verbatim;
  std::vector<std::string> source_ids;
  // Untransformed sentences; only populated by build_test_corpus.
  std::vector<std::string> original_sentences;
};

struct Workspace {
  std::filesystem::path root;
  TestCorpusSpec spec;
  std::vector<WorkspaceFile> files;
  std::vector<std::string> corpus_ids;

  std::filesystem::path suspects_dir() const { return root / "suspects"; }
  std::filesystem::path corpus_dir() const { return root / "corpus"; }
  std::filesystem::path sampled_dir() const { return root / "sampled"; }
};

/// Writes suspects/, corpus/ and workspace.json under `root`. Web and Mill
/// sources go into the provider corpus; Original sources never do.
Workspace build_test_corpus(const TestCorpusSpec& spec, const SourcePool& pool,
                            const std::filesystem::path& root);
Workspace load_workspace(const std::filesystem::path& root);

struct FileOutcome {
  std::string id;
  Category category = Category::Original;
  EditType edit_type = EditType::Verbatim;
  double percent_plagiarized = 0.0;
  bool alert = false;
  bool correct = false;
  std::string error;
};

struct AccuracyReport {
  EngineConfig config;
  std::map<std::pair<Category, EditType>, double> per_cell;  // percent
  std::map<Category, double> per_category_avg;
  double grand_avg = 0.0;
  std::vector<FileOutcome> files;
  double seconds = 0.0;
};

/// A file is correct when an Original file raises no alert or a Web/Mill file
/// does. Detection errors count as incorrect.
bool is_correct(Category category, bool alert);

AccuracyReport run_evaluation(const Workspace& workspace,
                              const EngineConfig& config, std::size_t jobs = 1);

nlohmann::json report_to_json(const AccuracyReport& report);

/// Accuracy table with one column per report, followed by the overall
/// comparison block.
std::string format_accuracy_table(const std::vector<AccuracyReport>& reports);

}  // namespace antiplag::eval
