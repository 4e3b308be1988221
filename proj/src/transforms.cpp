#include <algorithm>
#include <cctype>
#include <sstream>

#include "antiplag/errors.hpp"
#include "antiplag/evalharness.hpp"

namespace antiplag::eval {

namespace {

std::vector<std::string> split_words(std::string_view sentence) {
  std::vector<std::string> words;
  std::istringstream in{std::string(sentence)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const std::string& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Splits "Word," into {"", "Word", ","}: leading and trailing punctuation.
struct WordParts {
  std::string lead, core, tail;
};

WordParts split_punct(const std::string& word) {
  std::size_t b = 0;
  while (b < word.size() && !is_letter(word[b])) ++b;
  std::size_t e = word.size();
  while (e > b && !is_letter(word[e - 1])) --e;
  return {word.substr(0, b), word.substr(b, e - b), word.substr(e)};
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng() % i]);
  }
}

constexpr std::string_view kPivotWords[] = {
    "near",  "beside", "behind", "under", "above", "across", "around", "beyond",
    "toward", "inside", "along", "past", "through", "over", "against", "in",
    "on",    "at",     "from",   "with",  "after", "before", "during", "until",
    "while", "because", "although", "but", "and", "yet", "who", "that"};

bool is_pivot_word(const std::string& word) {
  const std::string core = lower(split_punct(word).core);
  return std::find(std::begin(kPivotWords), std::end(kPivotWords), core) !=
         std::end(kPivotWords);
}

}  // namespace

std::string insert_space(std::string_view sentence, std::size_t position) {
  std::string out(sentence);
  out.insert(std::min(position, out.size()), 1, ' ');
  return out;
}

std::string substitute_char(std::string_view sentence, std::size_t position,
                            char replacement) {
  std::string out(sentence);
  if (position < out.size()) out[position] = replacement;
  return out;
}

std::string add_comma_after_word(std::string_view sentence, std::size_t word) {
  std::vector<std::string> words = split_words(sentence);
  if (word >= words.size()) return std::string(sentence);
  std::string& w = words[word];
  if (!w.empty() && (w.back() == ',' || is_terminal(w.back()))) {
    return std::string(sentence);
  }
  // Insert in place so the original spacing is kept.
  std::size_t pos = 0;
  std::size_t seen = 0;
  bool in_word = false;
  for (; pos < sentence.size(); ++pos) {
    const bool space = std::isspace(static_cast<unsigned char>(sentence[pos])) != 0;
    if (!space && !in_word) {
      in_word = true;
    } else if (space && in_word) {
      in_word = false;
      if (seen == word) break;
      ++seen;
    }
  }
  std::string out(sentence);
  out.insert(pos, 1, ',');
  return out;
}

std::string remove_comma(std::string_view sentence, std::size_t position) {
  std::string out(sentence);
  if (position < out.size() && out[position] == ',') out.erase(position, 1);
  return out;
}

std::string exclaim(std::string_view sentence) {
  std::string out(sentence);
  if (!out.empty() && out.back() == '.') out.back() = '!';
  return out;
}

std::string rotate_words(std::string_view sentence, std::size_t pivot) {
  std::vector<std::string> words = split_words(sentence);
  if (pivot == 0 || pivot >= words.size()) return join_words(words);
  std::string terminal;
  std::string& last = words.back();
  while (!last.empty() && is_terminal(last.back())) {
    terminal.insert(terminal.begin(), last.back());
    last.pop_back();
  }
  const bool capital = !words[0].empty() &&
                       std::isupper(static_cast<unsigned char>(words[0][0]));
  if (capital && words[0].size() > 1 &&
      !std::isupper(static_cast<unsigned char>(words[0][1]))) {
    words[0][0] = static_cast<char>(std::tolower(static_cast<unsigned char>(words[0][0])));
  }
  std::rotate(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(pivot),
              words.end());
  // A comma left dangling at the new end would read oddly.
  while (!words.back().empty() && words.back().back() == ',') words.back().pop_back();
  if (words.back().empty()) words.pop_back();
  if (capital) {
    words[0][0] = static_cast<char>(std::toupper(static_cast<unsigned char>(words[0][0])));
  }
  words.back() += terminal;
  return join_words(words);
}

std::string transform_edited(std::string_view sentence, Rng& rng) {
  // Each kind of edit is used at most once per sentence, so edits never
  // cancel each other out.
  enum Kind { kSpace, kLetter, kComma, kExclaim };
  std::string out(sentence);
  std::vector<Kind> kinds;
  if (out.size() >= 2) kinds.push_back(kSpace);
  if (std::any_of(out.begin(), out.end(),
                  [](char c) { return std::islower(static_cast<unsigned char>(c)); })) {
    kinds.push_back(kLetter);
  }
  if (out.find(',') != std::string::npos || split_words(out).size() >= 2) {
    kinds.push_back(kComma);
  }
  if (!out.empty() && out.back() == '.') kinds.push_back(kExclaim);
  if (kinds.empty()) {
    return out + (out.empty() || out.back() != 'x' ? "x" : "y");
  }
  shuffle(kinds, rng);
  const std::size_t edits = std::min<std::size_t>(1 + rng() % 3, kinds.size());
  for (std::size_t e = 0; e < edits; ++e) {
    switch (kinds[e]) {
      case kSpace:
        out = insert_space(out, 1 + rng() % (out.size() - 1));
        break;
      case kLetter: {
        std::vector<std::size_t> letters;
        for (std::size_t i = 0; i < out.size(); ++i) {
          if (std::islower(static_cast<unsigned char>(out[i]))) letters.push_back(i);
        }
        const std::size_t pos = letters[rng() % letters.size()];
        char repl = static_cast<char>('a' + rng() % 25);
        if (repl >= out[pos]) ++repl;
        out = substitute_char(out, pos, repl);
        break;
      }
      case kComma: {
        std::vector<std::size_t> commas;
        for (std::size_t i = 0; i < out.size(); ++i) {
          if (out[i] == ',') commas.push_back(i);
        }
        const std::size_t words = split_words(out).size();
        std::vector<std::size_t> open_words;
        const auto list = split_words(out);
        for (std::size_t w = 0; w + 1 < list.size(); ++w) {
          if (list[w].back() != ',' && !is_terminal(list[w].back())) open_words.push_back(w);
        }
        if (!commas.empty() && (open_words.empty() || words < 2 || rng() % 2 == 0)) {
          out = remove_comma(out, commas[rng() % commas.size()]);
        } else if (!open_words.empty()) {
          out = add_comma_after_word(out, open_words[rng() % open_words.size()]);
        } else {
          out = substitute_char(out, 0, out[0] == 'x' ? 'y' : 'x');
        }
        break;
      }
      case kExclaim:
        out = exclaim(out);
        break;
    }
  }
  return out;
}

SynonymResult transform_synonymous(std::string_view sentence, const Lexicon& lexicon,
                                   Rng& rng) {
  std::vector<std::string> words = split_words(sentence);
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto it = lexicon.find(lower(split_punct(words[i]).core));
    if (it != lexicon.end() && !it->second.empty()) eligible.push_back(i);
  }
  if (eligible.empty()) return {std::string(sentence), 0};
  shuffle(eligible, rng);
  const std::size_t count = std::min<std::size_t>(1 + rng() % 2, eligible.size());
  for (std::size_t k = 0; k < count; ++k) {
    std::string& word = words[eligible[k]];
    WordParts parts = split_punct(word);
    const auto& options = lexicon.at(lower(parts.core));
    std::string replacement = options[rng() % options.size()];
    if (std::isupper(static_cast<unsigned char>(parts.core[0]))) {
      replacement[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(replacement[0])));
    }
    word = parts.lead + replacement + parts.tail;
  }
  return {join_words(words), count};
}

std::string transform_paraphrased(std::string_view sentence, const Lexicon& lexicon,
                                  Rng& rng) {
  const std::vector<std::string> words = split_words(sentence);
  if (words.size() < 4) {
    throw SentenceTooShort("paraphrasing needs at least four words");
  }
  std::vector<std::size_t> pivots;
  for (std::size_t i = 2; i + 2 < words.size(); ++i) {
    if (is_pivot_word(words[i])) pivots.push_back(i);
  }
  std::size_t pivot = words.size() / 2;
  if (!pivots.empty()) pivot = pivots[rng() % pivots.size()];
  std::string out = rotate_words(join_words(words), pivot);
  out = transform_edited(out, rng);
  return transform_synonymous(out, lexicon, rng).text;
}

std::string transform(EditType type, std::string_view sentence, const Lexicon& lexicon,
                      Rng& rng) {
  switch (type) {
    case EditType::Verbatim: return std::string(sentence);
    case EditType::Edited: return transform_edited(sentence, rng);
    case EditType::Synonymous: return transform_synonymous(sentence, lexicon, rng).text;
    case EditType::Paraphrased: return transform_paraphrased(sentence, lexicon, rng);
  }
  return std::string(sentence);
}

}  // namespace antiplag::eval
