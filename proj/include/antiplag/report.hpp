#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "antiplag/detector.hpp"

namespace antiplag {

inline constexpr const char* kEngineVersion = "1.0.0";

struct ReportBundle {
  std::vector<DetectionResult> results;
  std::map<std::string, std::string> texts;  // suspect id -> UTF-8 text
  std::string workspace;
  std::string generated_at;
  std::string engine_version = kEngineVersion;

  friend bool operator==(const ReportBundle&, const ReportBundle&) = default;
};

/// Throws InvalidReport when an area names a source without a link target,
/// when areas overlap or fall outside the text, or when a text is missing.
void validate(const ReportBundle& bundle);

/// Percentages are written on the 0-100 scale with one decimal.
nlohmann::json result_to_json(const DetectionResult& result);
DetectionResult result_from_json(const nlohmann::json& json);
nlohmann::json config_to_json(const EngineConfig& config);
EngineConfig config_from_json(const nlohmann::json& json);

nlohmann::json bundle_to_json(const ReportBundle& bundle);
ReportBundle bundle_from_json(const nlohmann::json& json);

void emit_json(const ReportBundle& bundle, const std::filesystem::path& path);
ReportBundle read_report(const std::filesystem::path& path);

std::string escape_html(std::string_view text);
/// File name of the per-suspect page.
std::string page_name(const std::string& suspect_id);
std::string render_index(const ReportBundle& bundle);
std::string render_document(const ReportBundle& bundle, const DetectionResult& result);

/// Writes index.html and one doc-<id>.html per result into `dir`. Source
/// links are relative to the workspace root, one level above `dir`.
void emit_html(const ReportBundle& bundle, const std::filesystem::path& dir);

}  // namespace antiplag
