#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "antiplag/errors.hpp"
#include "antiplag/evalharness.hpp"
#include "antiplag/lexicon_data.hpp"

namespace antiplag::eval {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kDeterminers[] = {"the", "a", "this", "that",
                                             "every", "one", "another"};

constexpr std::string_view kNouns[] = {
    "river",     "village",   "teacher",    "bridge",    "garden",
    "house",     "road",      "forest",     "mountain",  "journey",
    "letter",    "doctor",    "child",      "market",    "story",
    "boat",      "city",      "gift",       "painting",  "book",
    "shop",      "hill",      "friend",     "farmer",    "stone",
    "engineer",  "library",   "harbor",     "castle",    "lantern",
    "window",    "kitchen",   "festival",   "museum",    "station",
    "island",    "valley",    "merchant",   "soldier",   "sailor",
    "painter",   "musician",  "chapel",     "tower",     "orchard",
    "meadow",    "cottage",   "workshop",   "factory",   "school",
    "hospital",  "theater",   "monument",   "fountain",  "statue",
    "carriage",  "wagon",     "violin",     "piano",     "clock",
    "mirror",    "candle",    "blanket",    "basket",    "ladder",
    "hammer",    "compass",   "map",        "telescope", "notebook",
    "journal",   "manuscript", "recipe",    "quilt",     "harvest",
    "storm",     "crowd",     "council",    "committee", "captain",
    "mayor",     "neighbor",  "stranger",   "traveler",  "scholar",
    "poet",      "baker",     "tailor",     "carpenter", "blacksmith",
    "fisherman", "shepherd",  "gardener",   "architect", "historian",
    "student",   "lighthouse", "courtyard", "vineyard",  "observatory"};

constexpr std::string_view kAbstractNouns[] = {
    "history",  "freedom",   "patience", "courage",   "silence",
    "memory",   "tradition", "wisdom",   "future",    "beauty",
    "knowledge", "mystery",  "ambition", "loyalty",   "kindness",
    "honesty",  "curiosity", "progress", "tragedy",   "victory",
    "legacy",   "promise",   "failure",  "discipline", "reputation"};

constexpr std::string_view kAdjectives[] = {
    "ancient",  "angry",     "beautiful", "big",       "bright",
    "broken",   "busy",      "calm",      "careful",   "cheap",
    "clean",    "clever",    "cold",      "common",    "curious",
    "dark",     "difficult", "distant",   "dry",       "empty",
    "enormous", "famous",    "fast",      "fragile",   "friendly",
    "gentle",   "happy",     "heavy",     "honest",    "important",
    "modern",   "narrow",    "new",       "noisy",     "old",
    "ordinary", "patient",   "poor",      "quiet",     "rare",
    "rich",     "sad",       "serious",   "simple",    "small",
    "strange",  "strong",    "sudden",    "tired",     "useful",
    "warm",     "wide",      "wise",      "young",     "golden",
    "silver",   "wooden",    "crowded",   "hidden",    "lonely",
    "forgotten", "remarkable", "elegant", "northern",  "southern",
    "eastern",  "western",   "yellow",    "crimson",   "gray",
    "green",    "bitter",    "humble",    "tall",      "round",
    "fierce",   "hollow",    "sacred",    "restless",  "stubborn"};

constexpr std::string_view kAdverbs[] = {
    "carefully", "quietly",  "quickly",  "slowly",    "suddenly",
    "eagerly",   "rarely",   "often",    "finally",   "gladly",
    "proudly",   "calmly",   "secretly", "clearly",   "briefly",
    "politely",  "gently",   "firmly",   "nervously", "openly",
    "warmly",    "bravely",  "honestly", "patiently", "boldly"};

constexpr std::string_view kTransitiveVerbs[] = {
    "examined",  "described", "repaired",  "visited",    "protected",
    "collected", "admired",   "discovered", "designed",  "ignored",
    "replaced",  "followed",  "opened",    "carried",    "watched",
    "mentioned", "explored",  "prepared",  "delivered",  "rescued",
    "noticed",   "remembered", "purchased", "borrowed",  "restored",
    "celebrated", "considered", "painted", "measured",   "studied",
    "closed",    "cleaned",   "questioned", "defended",  "counted",
    "inspected", "praised",   "ordered",   "crossed",    "guarded",
    "improved",  "organized", "recorded",  "shared",     "planted",
    "located",   "observed",  "compared",  "decorated",  "abandoned"};

constexpr std::string_view kIntransitiveVerbs[] = {
    "arrived",  "waited",   "vanished",  "traveled",  "wandered",
    "departed", "struggled", "laughed",  "appeared",  "paused",
    "hesitated", "remained", "worked",   "listened",  "smiled",
    "rested",   "collapsed", "changed",  "returned",  "trembled"};

constexpr std::string_view kPrepositions[] = {
    "near",   "beside", "behind", "under",   "above",
    "across", "around", "beyond", "toward",  "inside",
    "along",  "past",   "through", "over",   "against"};

constexpr std::string_view kTimes[] = {
    "at dawn",           "after the storm",    "during the festival",
    "before the harvest", "at midnight",       "in early spring",
    "for many years",    "late that evening",  "within days",
    "that winter",       "after the war",      "before noon",
    "on Sunday",         "every autumn",       "last summer"};

constexpr std::string_view kNames[] = {
    "Anna",   "Marcus", "Elena", "Tobias", "Clara",  "Victor",  "Helena",
    "Simon",  "Irene",  "Oskar", "Lucia",  "Felix",  "Martha",  "Henrik",
    "Sofia",  "Julian", "Agnes", "Matthias", "Nora", "Peter",   "Greta",
    "Emil",   "Rosa",   "Leon",  "Ida",    "Hugo",   "Vera",    "Arthur",
    "Lena",   "Paul"};

constexpr std::string_view kPlaces[] = {
    "Lisbon", "Kyoto",  "Oslo",    "Vienna", "Cairo",   "Dublin", "Prague",
    "Quebec", "Lima",   "Bergen",  "Krakow", "Porto",   "Tallinn", "Seville",
    "Geneva", "Turin",  "Riga",    "Lyon",   "Nairobi", "Hobart"};

constexpr std::string_view kConjunctions[] = {"and", "but", "while",
                                              "although", "because", "yet"};

// D determiner, A adjective, N noun, B abstract noun, V transitive verb,
// I intransitive verb, R adverb, P preposition, T time phrase, M name,
// L place, C conjunction.
constexpr std::string_view kTemplates[] = {
    "D A N R V D A N P D N of L , C D A N I P D N T .",
    "T , M V D A N that D N had R V P D A N , C D N I R .",
    "M believed that D N of L had V D A N T , although D A N I P D N .",
    "D N P D N was A and A , C D A N from L V it R P D A N .",
    "According to M , D B of D N V D A N P D N in L , C D A N R I .",
    "D A N and D A N I P D N T , while M V D A N of D N .",
    "It was A that D N V D N R , C D N I P D A N near D A N of L .",
    "M and M V D A N P D A N of L before they I R P D N .",
    "When D N I P D N , D A N R V D N and D A N P D N .",
    "D B of D A N V M , who I P D N T and V D A N .",
    "T , D A N from L V D N C R V D A N P D A N .",
    "Nobody in L V D A N P D N until M I R P D A N T .",
    "D A N P D N R V D B of D A N , C M V D A N .",
    "M wrote that D A N V D N P D N , C D N I T ."};

template <std::size_t N>
std::string_view pick(const std::string_view (&words)[N], Rng& rng) {
  return words[rng() % N];
}

bool starts_with_vowel(std::string_view word) {
  if (word.empty()) return false;
  const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(word[0])));
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

std::string generate_sentence(Rng& rng) {
  const std::string_view pattern = pick(kTemplates, rng);
  std::vector<std::string> words;
  std::istringstream in{std::string(pattern)};
  std::string slot;
  while (in >> slot) {
    if (slot.size() != 1 || !std::isupper(static_cast<unsigned char>(slot[0]))) {
      words.push_back(slot);
      continue;
    }
    switch (slot[0]) {
      case 'D': words.emplace_back(pick(kDeterminers, rng)); break;
      case 'A': words.emplace_back(pick(kAdjectives, rng)); break;
      case 'N': words.emplace_back(pick(kNouns, rng)); break;
      case 'B': words.emplace_back(pick(kAbstractNouns, rng)); break;
      case 'V': words.emplace_back(pick(kTransitiveVerbs, rng)); break;
      case 'I': words.emplace_back(pick(kIntransitiveVerbs, rng)); break;
      case 'R': words.emplace_back(pick(kAdverbs, rng)); break;
      case 'P': words.emplace_back(pick(kPrepositions, rng)); break;
      case 'T': words.emplace_back(pick(kTimes, rng)); break;
      case 'M': words.emplace_back(pick(kNames, rng)); break;
      case 'L': words.emplace_back(pick(kPlaces, rng)); break;
      case 'C': words.emplace_back(pick(kConjunctions, rng)); break;
      default: words.push_back(slot); break;
    }
  }
  for (std::size_t i = 0; i + 1 < words.size(); ++i) {
    if ((words[i] == "a" || words[i] == "A") && starts_with_vowel(words[i + 1])) {
      words[i] += "n";
    }
  }
  std::string sentence;
  for (const std::string& w : words) {
    if (!sentence.empty() && w != "," && w != ".") sentence.push_back(' ');
    sentence += w;
  }
  sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
  return sentence;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + path.string());
  out << content;
  if (!out) throw IoFailure("short write to " + path.string());
}

std::string join_paragraphs(const std::vector<std::string>& sentences,
                            std::size_t per_paragraph) {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) out += (i % per_paragraph == 0) ? "\n\n" : " ";
    out += sentences[i];
  }
  out += "\n";
  return out;
}

}  // namespace

std::string_view to_string(Category category) {
  switch (category) {
    case Category::Original: return "original";
    case Category::Web: return "web";
    case Category::Mill: return "mill";
  }
  return "unknown";
}

std::string_view to_string(EditType type) {
  switch (type) {
    case EditType::Verbatim: return "verbatim";
    case EditType::Edited: return "edited";
    case EditType::Synonymous: return "synonymous";
    case EditType::Paraphrased: return "paraphrased";
  }
  return "unknown";
}

Category parse_category(std::string_view text) {
  const std::string t = lowercase(text);
  if (t == "original") return Category::Original;
  if (t == "web") return Category::Web;
  if (t == "mill") return Category::Mill;
  throw ConfigError("unknown test category '" + std::string(text) + "'");
}

EditType parse_edit_type(std::string_view text) {
  const std::string t = lowercase(text);
  if (t == "verbatim") return EditType::Verbatim;
  if (t == "edited") return EditType::Edited;
  if (t == "synonymous") return EditType::Synonymous;
  if (t == "paraphrased" || t == "paraphrase") return EditType::Paraphrased;
  throw ConfigError("unknown edit type '" + std::string(text) + "'");
}

Lexicon parse_lexicon(std::string_view text) {
  Lexicon lexicon;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("lexicon line " + std::to_string(line_no) + ": missing ':'");
    }
    const std::string word = lowercase(trim(line.substr(0, colon)));
    std::vector<std::string> synonyms;
    std::istringstream list(line.substr(colon + 1));
    std::string item;
    while (std::getline(list, item, ',')) {
      item = lowercase(trim(item));
      if (item.empty() || item == word) continue;
      if (item.find_first_of(" \t") != std::string::npos) {
        throw ConfigError("lexicon line " + std::to_string(line_no) +
                          ": synonyms must be single words");
      }
      synonyms.push_back(item);
    }
    if (word.empty() || synonyms.empty()) {
      throw ConfigError("lexicon line " + std::to_string(line_no) + ": empty entry");
    }
    auto& entry = lexicon[word];
    entry.insert(entry.end(), synonyms.begin(), synonyms.end());
  }
  return lexicon;
}

Lexicon load_lexicon(const fs::path& path) { return parse_lexicon(read_file(path)); }

const Lexicon& default_lexicon() {
  static const Lexicon lexicon = parse_lexicon(detail::kDefaultLexicon);
  return lexicon;
}

std::string format_lexicon(const Lexicon& lexicon) {
  std::string out;
  for (const auto& [word, synonyms] : lexicon) {
    out += word + ":";
    for (std::size_t i = 0; i < synonyms.size(); ++i) {
      out += (i == 0 ? " " : ", ") + synonyms[i];
    }
    out += "\n";
  }
  return out;
}

void TestCorpusSpec::validate() const {
  if (categories.empty()) throw ConfigError("spec needs at least one category");
  if (edit_types.empty()) throw ConfigError("spec needs at least one edit type");
  if (files_per_cell == 0) throw ConfigError("files_per_cell must be positive");
  if (sentences_per_file == 0) throw ConfigError("sentences_per_file must be positive");
  if (block_sentences == 0) throw ConfigError("block_sentences must be positive");
  if (std::set(categories.begin(), categories.end()).size() != categories.size() ||
      std::set(edit_types.begin(), edit_types.end()).size() != edit_types.size()) {
    throw ConfigError("spec lists a category or edit type twice");
  }
}

TestCorpusSpec spec_from_json(const nlohmann::json& json, const fs::path& base_dir) {
  TestCorpusSpec spec;
  try {
    if (json.contains("categories")) {
      spec.categories.clear();
      for (const auto& c : json.at("categories")) {
        spec.categories.push_back(parse_category(c.get<std::string>()));
      }
    }
    if (json.contains("edit_types")) {
      spec.edit_types.clear();
      for (const auto& t : json.at("edit_types")) {
        spec.edit_types.push_back(parse_edit_type(t.get<std::string>()));
      }
    }
    spec.files_per_cell = json.value("files_per_cell", spec.files_per_cell);
    spec.sentences_per_file = json.value("sentences_per_file", spec.sentences_per_file);
    spec.block_sentences = json.value("block_sentences", spec.block_sentences);
    spec.rng_seed = json.value("rng_seed", spec.rng_seed);
    if (json.contains("synonym_lexicon")) {
      const auto& lex = json.at("synonym_lexicon");
      if (lex.is_string()) {
        fs::path path = lex.get<std::string>();
        if (path.is_relative()) path = base_dir / path;
        spec.synonym_lexicon = load_lexicon(path);
      } else {
        spec.synonym_lexicon.clear();
        for (const auto& [word, synonyms] : lex.items()) {
          spec.synonym_lexicon[lowercase(word)] =
              synonyms.get<std::vector<std::string>>();
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed corpus spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

nlohmann::json spec_to_json(const TestCorpusSpec& spec) {
  nlohmann::json json;
  json["categories"] = nlohmann::json::array();
  for (Category c : spec.categories) json["categories"].push_back(to_string(c));
  json["edit_types"] = nlohmann::json::array();
  for (EditType t : spec.edit_types) json["edit_types"].push_back(to_string(t));
  json["files_per_cell"] = spec.files_per_cell;
  json["sentences_per_file"] = spec.sentences_per_file;
  json["block_sentences"] = spec.block_sentences;
  json["rng_seed"] = spec.rng_seed;
  json["synonym_lexicon"] = spec.synonym_lexicon;
  return json;
}

std::string SourceText::text() const { return join_paragraphs(sentences, 6); }

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    current.push_back(std::isspace(static_cast<unsigned char>(c)) ? ' ' : c);
    const bool terminal = c == '.' || c == '!' || c == '?';
    const bool boundary =
        i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]));
    if (terminal && boundary) {
      std::string s = trim(current);
      if (!s.empty()) sentences.push_back(std::move(s));
      current.clear();
    }
  }
  std::string rest = trim(current);
  if (!rest.empty()) sentences.push_back(std::move(rest));
  // Collapse inner whitespace runs.
  for (std::string& s : sentences) {
    std::string collapsed;
    for (char c : s) {
      if (c == ' ' && !collapsed.empty() && collapsed.back() == ' ') continue;
      collapsed.push_back(c);
    }
    s = std::move(collapsed);
  }
  return sentences;
}

SourceText source_from_document(const Document& doc, Category category) {
  return SourceText{doc.id, category, split_sentences(doc.utf8_text())};
}

SourcePool generate_source_pool(const TestCorpusSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::set<std::string> seen;
  auto fresh_sentence = [&] {
    for (;;) {
      std::string s = generate_sentence(rng);
      if (seen.insert(s).second) return s;
    }
  };
  SourcePool pool;
  const std::size_t needed = spec.sentences_per_category();
  for (Category category : {Category::Original, Category::Web, Category::Mill}) {
    // Mill sources are long essays; web pages and offline texts are shorter.
    const std::size_t per_doc = category == Category::Mill ? 100 : 40;
    const std::size_t docs = (needed * 5 / 2 + per_doc - 1) / per_doc + 2;
    for (std::size_t d = 0; d < docs; ++d) {
      SourceText source;
      source.id = std::string(to_string(category)) + "-" +
                  (d < 9 ? "00" : d < 99 ? "0" : "") + std::to_string(d + 1);
      source.category = category;
      for (std::size_t s = 0; s < per_doc; ++s) {
        source.sentences.push_back(fresh_sentence());
      }
      pool.documents.push_back(std::move(source));
    }
  }
  return pool;
}

Workspace build_test_corpus(const TestCorpusSpec& spec, const SourcePool& pool,
                            const fs::path& root) {
  spec.validate();
  Rng rng(spec.rng_seed);
  Workspace ws;
  ws.root = root;
  ws.spec = spec;

  std::map<Category, std::vector<std::size_t>> by_category;
  for (std::size_t i = 0; i < pool.documents.size(); ++i) {
    by_category[pool.documents[i].category].push_back(i);
  }
  std::vector<std::size_t> cursor(pool.documents.size(), 0);

  std::map<std::string, std::string> suspects;  // relative path -> text
  for (Category category : spec.categories) {
    const auto& candidates = by_category[category];
    for (EditType type : spec.edit_types) {
      for (std::size_t f = 0; f < spec.files_per_cell; ++f) {
        WorkspaceFile file;
        file.id = std::string(to_string(category)) + "-" +
                  std::string(to_string(type)) + "-" + std::to_string(f + 1);
        file.path = "suspects/" + file.id + ".txt";
        file.category = category;
        file.edit_type = type;
        std::vector<std::string> transformed;
        while (file.original_sentences.size() < spec.sentences_per_file) {
          const std::size_t want =
              std::min(spec.block_sentences,
                       spec.sentences_per_file - file.original_sentences.size());
          std::vector<std::size_t> usable;
          for (std::size_t idx : candidates) {
            if (pool.documents[idx].sentences.size() - cursor[idx] >= want) {
              usable.push_back(idx);
            }
          }
          if (usable.empty()) {
            throw InsufficientSourcePool(
                "not enough unused " + std::string(to_string(category)) +
                " sentences for " + file.id);
          }
          const std::size_t idx = usable[rng() % usable.size()];
          const SourceText& source = pool.documents[idx];
          if (std::find(file.source_ids.begin(), file.source_ids.end(), source.id) ==
              file.source_ids.end()) {
            file.source_ids.push_back(source.id);
          }
          for (std::size_t k = 0; k < want; ++k) {
            const std::string& original = source.sentences[cursor[idx] + k];
            file.original_sentences.push_back(original);
            transformed.push_back(
                transform(type, original, spec.synonym_lexicon, rng));
          }
          cursor[idx] += want;
        }
        suspects[file.path] = join_paragraphs(transformed, spec.block_sentences);
        ws.files.push_back(std::move(file));
      }
    }
  }

  // Regenerate from scratch so reruns with one seed are byte-identical.
  fs::remove_all(ws.suspects_dir());
  fs::remove_all(ws.corpus_dir());
  fs::remove_all(ws.sampled_dir());
  for (const auto& [path, text] : suspects) write_file(root / path, text);
  for (const SourceText& source : pool.documents) {
    if (source.category == Category::Original) continue;
    write_file(ws.corpus_dir() / (source.id + ".txt"), source.text());
    ws.corpus_ids.push_back(source.id);
  }

  nlohmann::json manifest;
  manifest["spec"] = spec_to_json(spec);
  manifest["corpus"] = ws.corpus_ids;
  manifest["files"] = nlohmann::json::array();
  for (const WorkspaceFile& file : ws.files) {
    manifest["files"].push_back({{"id", file.id},
                                 {"path", file.path},
                                 {"category", to_string(file.category)},
                                 {"edit_type", to_string(file.edit_type)},
                                 {"sources", file.source_ids}});
  }
  write_file(root / "workspace.json", manifest.dump(2) + "\n");
  return ws;
}

Workspace load_workspace(const fs::path& root) {
  const fs::path path = root / "workspace.json";
  Workspace ws;
  ws.root = root;
  try {
    const auto json = nlohmann::json::parse(read_file(path));
    ws.spec = spec_from_json(json.at("spec"), root);
    ws.corpus_ids = json.at("corpus").get<std::vector<std::string>>();
    for (const auto& item : json.at("files")) {
      WorkspaceFile file;
      file.id = item.at("id").get<std::string>();
      file.path = item.at("path").get<std::string>();
      file.category = parse_category(item.at("category").get<std::string>());
      file.edit_type = parse_edit_type(item.at("edit_type").get<std::string>());
      file.source_ids = item.at("sources").get<std::vector<std::string>>();
      ws.files.push_back(std::move(file));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed workspace " + path.string() + ": " + e.what());
  }
  return ws;
}

}  // namespace antiplag::eval
