#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "antiplag/cli.hpp"
#include "antiplag/detector.hpp"
#include "antiplag/errors.hpp"
#include "antiplag/evalharness.hpp"
#include "antiplag/report.hpp"

namespace antiplag::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string workspace;
  EngineConfig config;
  std::string match_mode = "edit";
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());

  // index
  std::string corpus_dir;
  // detect
  std::string suspects_dir;
  std::string provider;
  std::string hermetic_corpus;
  std::string out;
  std::string html_dir;
  // eval
  std::string spec_file;
  std::uint64_t seed = 2009;
  bool seed_given = false;
  std::vector<std::size_t> steps;
  // report
  std::string report_file;
};

void add_engine_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("-W,--window", o.config.window_size, "Words per sampling query")
      ->capture_default_str();
  cmd->add_option("-S,--step", o.config.step_size, "Words between query starts")
      ->capture_default_str();
  cmd->add_option("--edit-ratio", o.config.edit_ratio,
                  "Edit operations allowed per character")
      ->capture_default_str();
  cmd->add_option("--min-area-chars", o.config.min_area_chars,
                  "Shortest lone match area that keeps its source")
      ->capture_default_str();
  cmd->add_option("--alert-threshold", o.config.alert_threshold,
                  "Plagiarized fraction that raises an alert")
      ->capture_default_str();
  cmd->add_option("--min-sample-hits", o.config.min_sample_hits,
                  "Match areas a source needs before it is downloaded")
      ->capture_default_str();
  cmd->add_option("--match-mode", o.match_mode, "exact or edit")
      ->check(CLI::IsMember({"exact", "edit"}))
      ->capture_default_str();
  cmd->add_option("--max-hits", o.config.max_hits, "Search results read per query")
      ->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Documents processed in parallel")
      ->check(CLI::PositiveNumber);
}

fs::path workspace_root(const Options& o) {
  if (const char* env = std::getenv("ANTIPLAG_WORKSPACE"); env != nullptr && *env) {
    return env;
  }
  return o.workspace.empty() ? fs::path(".") : fs::path(o.workspace);
}

std::vector<fs::path> document_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoFailure("directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".txt" || ext == ".html" || ext == ".htm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int cmd_index(const Options& o, std::ostream& out) {
  const auto corpus = load_corpus(o.corpus_dir);
  const auto index = build_index(corpus, o.config.index_gram_width());
  nlohmann::json stats = {{"documents", index->document_count()},
                          {"gram_width", index->gram_width()},
                          {"keys", index->key_count()},
                          {"postings", index->posting_count()}};
  out << stats.dump(2) << '\n';
  return kExitOk;
}

int cmd_detect(const Options& o, std::ostream& out, std::ostream& err) {
  const fs::path root = workspace_root(o);
  std::unique_ptr<LocalProvider> provider;
  std::unique_ptr<SampledSourceStore> store;
  DetectionContext context;
  if (!o.hermetic_corpus.empty()) {
    context.local_corpus =
        build_index(load_corpus(o.hermetic_corpus), o.config.index_gram_width());
  } else {
    fs::path provider_dir = root / "corpus";
    if (!o.provider.empty()) {
      const std::string prefix = "local:";
      if (o.provider.rfind(prefix, 0) != 0) {
        throw ConfigError("unsupported provider '" + o.provider + "' (use local:<dir>)");
      }
      provider_dir = o.provider.substr(prefix.size());
    }
    provider = std::make_unique<LocalProvider>(
        build_index(load_corpus(provider_dir, Origin::SampledWeb),
                    o.config.index_gram_width()));
    store = std::make_unique<SampledSourceStore>(root / "sampled", provider->name());
    context.provider = provider.get();
    context.store = store.get();
  }

  bool document_error = false;
  std::vector<DocumentPtr> suspects;
  const fs::path suspects_dir = o.suspects_dir;
  for (const fs::path& file : document_files(suspects_dir)) {
    fs::path rel = fs::relative(file, suspects_dir);
    rel.replace_extension();
    try {
      suspects.push_back(std::make_shared<const Document>(
          ingest_file(file.string(), Origin::Suspect, rel.generic_string())));
    } catch (const Error& e) {
      err << rel.generic_string() << ": " << e.what() << '\n';
      document_error = true;
    }
  }

  ReportBundle bundle;
  bundle.workspace = root.string();
  bundle.generated_at = current_timestamp();
  bool any_alert = false;
  std::map<std::string, DocumentPtr> by_id;
  for (const DocumentPtr& doc : suspects) by_id[doc->id] = doc;
  for (BatchItem& item : detect_batch(suspects, o.config, context, o.jobs)) {
    if (!item.result) {
      err << item.suspect_id << ": " << item.error << '\n';
      document_error = true;
      continue;
    }
    const DetectionResult& r = *item.result;
    char line[64];
    std::snprintf(line, sizeof line, "%6.1f%%", std::round(r.percent_plagiarized * 1000.0) / 10.0);
    out << line << "  " << (r.alert ? "ALERT" : "ok   ") << "  " << r.suspect_id << '\n';
    any_alert = any_alert || r.alert;
    bundle.texts[r.suspect_id] = by_id.at(r.suspect_id)->utf8_text();
    bundle.results.push_back(std::move(*item.result));
  }

  validate(bundle);
  const fs::path json_path = o.out.empty() ? root / "results.json" : fs::path(o.out);
  emit_json(bundle, json_path);
  emit_html(bundle, o.html_dir.empty() ? root / "report" : fs::path(o.html_dir));
  if (document_error) return kExitDocumentError;
  return any_alert ? kExitAlert : kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const fs::path spec_path = o.spec_file;
  eval::TestCorpusSpec spec;
  try {
    spec = eval::spec_from_json(nlohmann::json::parse(read_file(spec_path)),
                                spec_path.parent_path());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(spec_path.string() + ": " + e.what());
  }
  if (o.seed_given) spec.rng_seed = o.seed;
  const fs::path root = o.workspace.empty() && !std::getenv("ANTIPLAG_WORKSPACE")
                            ? fs::path("eval-workspace")
                            : workspace_root(o);
  const auto pool = eval::generate_source_pool(spec, spec.rng_seed);
  const auto workspace = eval::build_test_corpus(spec, pool, root);

  std::vector<std::size_t> steps = o.steps;
  if (steps.empty()) steps.push_back(o.config.step_size);
  std::vector<eval::AccuracyReport> reports;
  for (std::size_t step : steps) {
    EngineConfig config = o.config;
    config.step_size = step;
    reports.push_back(eval::run_evaluation(workspace, config, o.jobs));
  }
  const std::string table = eval::format_accuracy_table(reports);
  out << table;

  nlohmann::json json;
  json["spec"] = eval::spec_to_json(spec);
  json["workspace"] = root.string();
  json["reports"] = nlohmann::json::array();
  for (const auto& r : reports) json["reports"].push_back(eval::report_to_json(r));
  json["table"] = table;
  const fs::path out_path = o.out.empty() ? root / "eval-report.json" : fs::path(o.out);
  std::error_code ec;
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path(), ec);
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!(file << json.dump(2) << '\n')) throw IoFailure("cannot write " + out_path.string());
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  const fs::path path = o.report_file;
  const ReportBundle bundle = read_report(path);
  validate(bundle);
  const fs::path dir = o.html_dir.empty()
                           ? (path.has_parent_path() ? path.parent_path() : fs::path("."))
                                 / "report"
                           : fs::path(o.html_dir);
  emit_html(bundle, dir);
  out << (dir / "index.html").string() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Sampling-based plagiarism detection", "antiplag"};
  app.require_subcommand(1);
  app.add_option("--workspace", o.workspace,
                 "Workspace root (ANTIPLAG_WORKSPACE overrides)");

  CLI::App* index = app.add_subcommand("index", "Index a corpus and print statistics");
  index->add_option("corpus-dir", o.corpus_dir, "Corpus directory")->required();
  index->add_option("-W,--window", o.config.window_size, "Words per sampling query")
      ->capture_default_str();

  CLI::App* detect_cmd = app.add_subcommand("detect", "Check suspect documents");
  detect_cmd->add_option("--suspects", o.suspects_dir, "Directory of suspects")->required();
  auto* provider_opt = detect_cmd->add_option(
      "--provider", o.provider, "Search provider, local:<dir> (default: <workspace>/corpus)");
  detect_cmd->add_option("--corpus", o.hermetic_corpus,
                         "Hermetic detection against this local collection")
      ->excludes(provider_opt);
  detect_cmd->add_option("--out", o.out, "Results JSON (default: <workspace>/results.json)");
  detect_cmd->add_option("--html", o.html_dir, "HTML directory (default: <workspace>/report)");
  detect_cmd->add_option("--workspace", o.workspace, "Workspace root");
  add_engine_flags(detect_cmd, o);

  CLI::App* eval_cmd = app.add_subcommand("eval", "Generate a test corpus and measure accuracy");
  eval_cmd->add_option("--spec", o.spec_file, "Corpus spec JSON")->required();
  eval_cmd->add_option("--seed", o.seed, "Generator seed (overrides the spec)")
      ->each([&](const std::string&) { o.seed_given = true; });
  eval_cmd->add_option("--out", o.out, "Accuracy report JSON");
  eval_cmd->add_option("--steps", o.steps, "Step sizes to compare, e.g. 6,8")
      ->delimiter(',');
  eval_cmd->add_option("--workspace", o.workspace, "Workspace root");
  add_engine_flags(eval_cmd, o);

  CLI::App* report_cmd = app.add_subcommand("report", "Render HTML from results JSON");
  report_cmd->add_option("results", o.report_file, "Results JSON")->required();
  report_cmd->add_option("--html", o.html_dir, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    o.config.match_mode = parse_match_mode(o.match_mode);
    o.config.validate();
    if (*index) return cmd_index(o, out);
    if (*detect_cmd) return cmd_detect(o, out, err);
    if (*eval_cmd) return cmd_eval(o, out);
    if (*report_cmd) return cmd_report(o, out);
  } catch (const ConfigError& e) {
    err << "antiplag: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "antiplag: " << e.what() << '\n';
    return kExitDocumentError;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace antiplag::cli
