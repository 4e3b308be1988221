#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "antiplag/errors.hpp"
#include "antiplag/report.hpp"
#include "antiplag/unicode.hpp"

namespace antiplag {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double percent_1dp(double fraction) { return std::round(fraction * 1000.0) / 10.0; }

std::string fixed1(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", value);
  return buf;
}

void write_text(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot write " + path.string());
    out << content;
    if (!out.flush()) throw IoFailure("short write to " + path.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoFailure("cannot replace " + path.string() + ": " + ec.message());
}

std::string link_target(const std::string& uri) {
  if (uri.find("://") != std::string::npos || fs::path(uri).is_absolute()) return uri;
  return "../" + uri;
}

// Kept free of digits so every number on a page comes from the results.
const char* kStyle =
    "body{font-family:sans-serif;margin:auto}"
    "mark{background:gold}.alert{color:white;background:firebrick}"
    ".ok{color:white;background:seagreen}.src{font-size:small}"
    ".text{white-space:pre-wrap}";

std::string page_head(const std::string& title) {
  return "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" +
         escape_html(title) + "</title><style>" + kStyle + "</style></head><body>\n";
}

}  // namespace

void validate(const ReportBundle& bundle) {
  for (const DetectionResult& r : bundle.results) {
    const auto text = bundle.texts.find(r.suspect_id);
    if (text == bundle.texts.end()) {
      throw InvalidReport("no text for suspect " + r.suspect_id);
    }
    if (decode_utf8(text->second).size() != r.text_length) {
      throw InvalidReport("text length mismatch for " + r.suspect_id);
    }
    std::size_t last_end = 0;
    for (const MatchArea& area : r.areas) {
      if (area.suspect_span.start < last_end || area.suspect_span.end > r.text_length ||
          area.suspect_span.empty()) {
        throw InvalidReport("bad area in " + r.suspect_id);
      }
      last_end = area.suspect_span.end;
      for (const auto& [source_id, match] : area.sources) {
        if (!r.source_uris.contains(source_id)) {
          throw InvalidReport("source " + source_id + " in " + r.suspect_id +
                              " has no stored copy");
        }
      }
    }
  }
}

json config_to_json(const EngineConfig& c) {
  return {{"window_size", c.window_size},
          {"step_size", c.step_size},
          {"edit_ratio", c.edit_ratio},
          {"min_sample_hits", c.min_sample_hits},
          {"min_area_chars", c.min_area_chars},
          {"alert_threshold", c.alert_threshold},
          {"match_mode", to_string(c.match_mode)},
          {"max_hits", c.max_hits},
          {"expansion_step", c.expansion_step}};
}

EngineConfig config_from_json(const json& j) {
  EngineConfig c;
  c.window_size = j.at("window_size").get<std::size_t>();
  c.step_size = j.at("step_size").get<std::size_t>();
  c.edit_ratio = j.at("edit_ratio").get<double>();
  c.min_sample_hits = j.at("min_sample_hits").get<std::size_t>();
  c.min_area_chars = j.at("min_area_chars").get<std::size_t>();
  c.alert_threshold = j.at("alert_threshold").get<double>();
  c.match_mode = parse_match_mode(j.at("match_mode").get<std::string>());
  c.max_hits = j.at("max_hits").get<std::size_t>();
  c.expansion_step = j.value("expansion_step", std::size_t{0});
  return c;
}

json result_to_json(const DetectionResult& r) {
  json areas = json::array();
  for (const MatchArea& area : r.areas) {
    json sources = json::array();
    for (const auto& [source_id, m] : area.sources) {
      sources.push_back({{"source_id", source_id},
                         {"uri", r.source_uris.contains(source_id)
                                     ? r.source_uris.at(source_id)
                                     : std::string()},
                         {"source_start", m.source.start},
                         {"source_end", m.source.end},
                         {"suspect_start", m.suspect.start},
                         {"suspect_end", m.suspect.end},
                         {"edit_cost", m.edit_cost}});
    }
    areas.push_back({{"start", area.suspect_span.start},
                     {"end", area.suspect_span.end},
                     {"sources", std::move(sources)},
                     {"origin_queries", area.origin_queries}});
  }
  json sources = json::object();
  for (const auto& [id, uri] : r.source_uris) {
    sources[id] = {{"uri", uri},
                   {"covered_chars", r.per_source_coverage.contains(id)
                                         ? r.per_source_coverage.at(id)
                                         : std::size_t{0}}};
  }
  return {{"suspect_id", r.suspect_id},
          {"suspect_uri", r.suspect_uri},
          {"text_length", r.text_length},
          {"covered_chars", r.covered_chars},
          {"percent_plagiarized", percent_1dp(r.percent_plagiarized)},
          {"alert", r.alert},
          {"areas", std::move(areas)},
          {"sources", std::move(sources)},
          {"config", config_to_json(r.config)}};
}

DetectionResult result_from_json(const json& j) {
  DetectionResult r;
  r.suspect_id = j.at("suspect_id").get<std::string>();
  r.suspect_uri = j.value("suspect_uri", std::string());
  r.text_length = j.at("text_length").get<std::size_t>();
  r.covered_chars = j.at("covered_chars").get<std::size_t>();
  r.alert = j.at("alert").get<bool>();
  r.config = config_from_json(j.at("config"));
  // The stored percentage is rounded; the exact fraction follows from the counts.
  r.percent_plagiarized = r.text_length == 0
                              ? 0.0
                              : static_cast<double>(r.covered_chars) /
                                    static_cast<double>(r.text_length);
  for (const json& a : j.at("areas")) {
    MatchArea area;
    area.suspect_span = {a.at("start").get<std::size_t>(), a.at("end").get<std::size_t>()};
    area.origin_queries = a.value("origin_queries", std::set<std::size_t>{});
    for (const json& s : a.at("sources")) {
      SpanMatch m;
      m.source = {s.at("source_start").get<std::size_t>(),
                  s.at("source_end").get<std::size_t>()};
      m.suspect = {s.value("suspect_start", area.suspect_span.start),
                   s.value("suspect_end", area.suspect_span.end)};
      m.edit_cost = s.at("edit_cost").get<std::size_t>();
      const std::string id = s.at("source_id").get<std::string>();
      area.sources.emplace(id, m);
      if (s.contains("uri")) r.source_uris[id] = s.at("uri").get<std::string>();
    }
    r.areas.push_back(std::move(area));
  }
  if (j.contains("sources")) {
    for (const auto& [id, info] : j.at("sources").items()) {
      r.source_uris[id] = info.at("uri").get<std::string>();
      r.per_source_coverage[id] = info.at("covered_chars").get<std::size_t>();
    }
  }
  return r;
}

json bundle_to_json(const ReportBundle& bundle) {
  json results = json::array();
  for (const DetectionResult& r : bundle.results) {
    json item = result_to_json(r);
    if (auto t = bundle.texts.find(r.suspect_id); t != bundle.texts.end()) {
      item["text"] = t->second;
    }
    results.push_back(std::move(item));
  }
  return {{"results", std::move(results)},
          {"workspace", bundle.workspace},
          {"generated_at", bundle.generated_at},
          {"engine_version", bundle.engine_version}};
}

ReportBundle bundle_from_json(const json& j) {
  ReportBundle bundle;
  try {
    bundle.workspace = j.value("workspace", std::string());
    bundle.generated_at = j.value("generated_at", std::string());
    bundle.engine_version = j.value("engine_version", std::string(kEngineVersion));
    for (const json& item : j.at("results")) {
      DetectionResult r = result_from_json(item);
      if (item.contains("text")) bundle.texts[r.suspect_id] = item.at("text").get<std::string>();
      bundle.results.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw InvalidReport(std::string("malformed report: ") + e.what());
  }
  return bundle;
}

void emit_json(const ReportBundle& bundle, const fs::path& path) {
  write_text(path, bundle_to_json(bundle).dump(2) + "\n");
}

ReportBundle read_report(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  json j;
  try {
    j = json::parse(buffer.str());
  } catch (const json::exception& e) {
    throw InvalidReport(path.string() + ": " + e.what());
  }
  return bundle_from_json(j);
}

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string page_name(const std::string& suspect_id) {
  std::string name = "doc-";
  for (char c : suspect_id) {
    const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                      c == '_' || c == '.';
    name.push_back(safe ? c : '_');
  }
  return name + ".html";
}

std::string render_index(const ReportBundle& bundle) {
  std::string out = page_head("antiplag report");
  out += "<h1>Inspected documents</h1>\n<p>Generated " +
         escape_html(bundle.generated_at) + " by antiplag " +
         escape_html(bundle.engine_version) + "</p>\n";
  out += "<table>\n<tr><th>Document</th><th>Plagiarized</th><th>Status</th></tr>\n";
  for (const DetectionResult& r : bundle.results) {
    out += "<tr><td><a href=\"" + escape_html(page_name(r.suspect_id)) + "\">" +
           escape_html(r.suspect_id) + "</a></td><td>" +
           fixed1(percent_1dp(r.percent_plagiarized)) + "%</td><td>" +
           (r.alert ? "<span class=\"alert\">alert</span>"
                    : "<span class=\"ok\">ok</span>") +
           "</td></tr>\n";
  }
  out += "</table>\n</body></html>\n";
  return out;
}

std::string render_document(const ReportBundle& bundle, const DetectionResult& r) {
  const auto text_it = bundle.texts.find(r.suspect_id);
  const std::u32string text =
      text_it == bundle.texts.end() ? std::u32string() : decode_utf8(text_it->second);
  std::string out = page_head(r.suspect_id);
  out += "<p><a href=\"index.html\">All documents</a></p>\n<h1>" +
         escape_html(r.suspect_id) + "</h1>\n<p>Plagiarized: " +
         fixed1(percent_1dp(r.percent_plagiarized)) + "% " +
         (r.alert ? "<span class=\"alert\">alert</span>" : "<span class=\"ok\">ok</span>") +
         "</p>\n<div class=\"text\">";
  std::size_t pos = 0;
  auto plain = [&](std::size_t end) {
    end = std::min(end, text.size());
    if (end > pos) out += escape_html(encode_utf8(text.substr(pos, end - pos)));
    pos = std::max(pos, end);
  };
  for (const MatchArea& area : r.areas) {
    plain(area.suspect_span.start);
    const std::size_t end = std::min(area.suspect_span.end, text.size());
    out += "<mark>";
    if (end > pos) out += escape_html(encode_utf8(text.substr(pos, end - pos)));
    out += "</mark>";
    pos = std::max(pos, end);
    for (const auto& [source_id, match] : area.sources) {
      const auto uri = r.source_uris.find(source_id);
      const std::string href = uri == r.source_uris.end() ? "" : link_target(uri->second);
      out += "<a class=\"src\" href=\"" + escape_html(href) + "\">[" +
             escape_html(source_id) + "]</a>";
    }
  }
  plain(text.size());
  out += "</div>\n</body></html>\n";
  return out;
}

void emit_html(const ReportBundle& bundle, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "index.html", render_index(bundle));
  for (const DetectionResult& r : bundle.results) {
    write_text(dir / page_name(r.suspect_id), render_document(bundle, r));
  }
}

}  // namespace antiplag
