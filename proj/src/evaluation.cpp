#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "antiplag/detector.hpp"
#include "antiplag/errors.hpp"
#include "antiplag/evalharness.hpp"

namespace antiplag::eval {

namespace {

std::string fixed1(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", value);
  return buf;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string column_label(const EngineConfig& config) {
  return "W = " + std::to_string(config.window_size) +
         ", S = " + std::to_string(config.step_size);
}

std::string capitalized(std::string_view word) {
  std::string s(word);
  if (!s.empty()) s[0] = static_cast<char>(s[0] - ('a' <= s[0] && s[0] <= 'z' ? 32 : 0));
  return s;
}

}  // namespace

bool is_correct(Category category, bool alert) {
  return category == Category::Original ? !alert : alert;
}

AccuracyReport run_evaluation(const Workspace& workspace, const EngineConfig& config,
                              std::size_t jobs) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  auto corpus = load_corpus(workspace.corpus_dir(), Origin::LocalCorpus);
  auto index = build_index(std::move(corpus), config.index_gram_width());
  LocalProvider provider(index, "web");
  SampledSourceStore store(workspace.sampled_dir(), provider.name());

  std::vector<DocumentPtr> suspects;
  std::vector<std::string> load_errors(workspace.files.size());
  for (std::size_t i = 0; i < workspace.files.size(); ++i) {
    const WorkspaceFile& file = workspace.files[i];
    try {
      suspects.push_back(std::make_shared<const Document>(
          ingest_file((workspace.root / file.path).string(), Origin::Suspect, file.id)));
    } catch (const std::exception& e) {
      load_errors[i] = e.what();
    }
  }

  DetectionContext context;
  context.provider = &provider;
  context.store = &store;
  const std::vector<BatchItem> items = detect_batch(suspects, config, context, jobs);
  std::map<std::string, const BatchItem*> by_id;
  for (const BatchItem& item : items) by_id[item.suspect_id] = &item;

  AccuracyReport report;
  report.config = config;
  std::map<std::pair<Category, EditType>, std::pair<std::size_t, std::size_t>> tally;
  for (std::size_t i = 0; i < workspace.files.size(); ++i) {
    const WorkspaceFile& file = workspace.files[i];
    FileOutcome outcome;
    outcome.id = file.id;
    outcome.category = file.category;
    outcome.edit_type = file.edit_type;
    const auto found = by_id.find(file.id);
    if (!load_errors[i].empty()) {
      outcome.error = load_errors[i];
    } else if (found == by_id.end()) {
      outcome.error = "no detection result";
    } else if (!found->second->result) {
      outcome.error = found->second->error;
    } else {
      outcome.percent_plagiarized = found->second->result->percent_plagiarized;
      outcome.alert = found->second->result->alert;
      outcome.correct = is_correct(file.category, outcome.alert);
    }
    auto& [correct, total] = tally[{file.category, file.edit_type}];
    correct += outcome.correct ? 1 : 0;
    ++total;
    report.files.push_back(std::move(outcome));
  }

  std::map<Category, std::pair<double, std::size_t>> category_sums;
  double grand = 0.0;
  for (const auto& [cell, counts] : tally) {
    const double pct = 100.0 * static_cast<double>(counts.first) /
                       static_cast<double>(counts.second);
    report.per_cell[cell] = pct;
    category_sums[cell.first].first += pct;
    ++category_sums[cell.first].second;
    grand += pct;
  }
  for (const auto& [category, sum] : category_sums) {
    report.per_category_avg[category] = sum.first / static_cast<double>(sum.second);
  }
  report.grand_avg = tally.empty() ? 0.0 : grand / static_cast<double>(tally.size());
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                 started)
                       .count();
  return report;
}

nlohmann::json report_to_json(const AccuracyReport& report) {
  nlohmann::json json;
  json["config"] = {{"window_size", report.config.window_size},
                    {"step_size", report.config.step_size},
                    {"edit_ratio", report.config.edit_ratio},
                    {"match_mode", to_string(report.config.match_mode)},
                    {"min_sample_hits", report.config.min_sample_hits},
                    {"min_area_chars", report.config.min_area_chars},
                    {"alert_threshold", report.config.alert_threshold},
                    {"max_hits", report.config.max_hits}};
  nlohmann::json cells = nlohmann::json::object();
  for (const auto& [cell, pct] : report.per_cell) {
    cells[std::string(to_string(cell.first))][std::string(to_string(cell.second))] = pct;
  }
  json["per_cell"] = cells;
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [category, avg] : report.per_category_avg) {
    cats[std::string(to_string(category))] = avg;
  }
  json["per_category_avg"] = cats;
  json["grand_avg"] = report.grand_avg;
  json["files"] = nlohmann::json::array();
  for (const FileOutcome& f : report.files) {
    nlohmann::json item = {{"id", f.id},
                           {"category", to_string(f.category)},
                           {"edit_type", to_string(f.edit_type)},
                           {"percent_plagiarized", f.percent_plagiarized * 100.0},
                           {"alert", f.alert},
                           {"correct", f.correct}};
    if (!f.error.empty()) item["error"] = f.error;
    json["files"].push_back(std::move(item));
  }
  return json;
}

std::string format_accuracy_table(const std::vector<AccuracyReport>& reports) {
  std::vector<std::string> labels;
  std::size_t col = 6;
  for (const AccuracyReport& r : reports) {
    labels.push_back(column_label(r.config));
    col = std::max(col, labels.back().size());
  }
  constexpr std::size_t kCat = 10;
  constexpr std::size_t kType = 13;

  std::ostringstream out;
  out << pad_right("", kCat) << pad_right("", kType);
  for (const std::string& label : labels) out << "  " << pad_left(label, col);
  out << '\n';

  std::vector<Category> categories;
  std::vector<EditType> types;
  for (const AccuracyReport& r : reports) {
    for (const auto& [cell, pct] : r.per_cell) {
      if (std::find(categories.begin(), categories.end(), cell.first) == categories.end())
        categories.push_back(cell.first);
      if (std::find(types.begin(), types.end(), cell.second) == types.end())
        types.push_back(cell.second);
    }
  }
  std::sort(categories.begin(), categories.end());
  std::sort(types.begin(), types.end());

  for (Category category : categories) {
    bool first = true;
    for (EditType type : types) {
      out << pad_right(first ? capitalized(to_string(category)) : "", kCat)
          << pad_right(capitalized(to_string(type)), kType);
      first = false;
      for (const AccuracyReport& r : reports) {
        const auto it = r.per_cell.find({category, type});
        out << "  " << pad_left(it == r.per_cell.end() ? "-" : fixed1(it->second), col);
      }
      out << '\n';
    }
    out << pad_right("", kCat) << pad_right("AVERAGE", kType);
    for (const AccuracyReport& r : reports) {
      const auto it = r.per_category_avg.find(category);
      out << "  " << pad_left(it == r.per_category_avg.end() ? "-" : fixed1(it->second), col);
    }
    out << '\n';
  }
  out << pad_right("AVERAGE", kCat + kType);
  for (const AccuracyReport& r : reports) out << "  " << pad_left(fixed1(r.grand_avg), col);
  out << "\n\n";

  std::size_t name_width = 12;
  std::vector<std::string> names;
  for (const AccuracyReport& r : reports) {
    names.push_back("antiplag, W=" + std::to_string(r.config.window_size) +
                    ", S=" + std::to_string(r.config.step_size));
    name_width = std::max(name_width, names.back().size());
  }
  out << pad_right("System", name_width) << "  Avg. accuracy  Seconds\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out << pad_right(names[i], name_width) << "  "
        << pad_left(fixed1(reports[i].grand_avg), 13) << "  "
        << pad_left(fixed1(reports[i].seconds), 7) << '\n';
  }
  return out.str();
}

}  // namespace antiplag::eval
