#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "antiplag/errors.hpp"
#include "antiplag/searchindex.hpp"
#include "antiplag/unicode.hpp"

namespace antiplag {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kLocalIdLength = 16;

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageFailure("cannot write " + tmp.string());
    out << content;
    if (!out) throw StorageFailure("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw StorageFailure("cannot rename into " + path.string());
}

}  // namespace

std::string current_timestamp() {
  std::time_t now{};
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

SampledSourceStore::SampledSourceStore(fs::path root, std::string provider)
    : root_(std::move(root)), provider_(std::move(provider)) {
  std::error_code ec;
  fs::create_directories(root_ / provider_, ec);
  if (ec) throw StorageFailure("cannot create " + (root_ / provider_).string());
  load_manifest();
}

fs::path SampledSourceStore::path_for(const std::string& local_id) const {
  return root_ / provider_ / (local_id + ".txt");
}

std::string SampledSourceStore::relative_path_for(
    const std::string& local_id) const {
  return (fs::path(root_.filename()) / provider_ / (local_id + ".txt"))
      .generic_string();
}

void SampledSourceStore::load_manifest() {
  const fs::path path = root_ / "manifest.json";
  if (!fs::exists(path)) return;
  std::ifstream in(path);
  try {
    const auto json = nlohmann::json::parse(in);
    for (const auto& item : json) {
      ManifestEntry entry{item.at("uri").get<std::string>(),
                          item.at("id").get<std::string>(),
                          item.at("sha256").get<std::string>(),
                          item.at("fetched_at").get<std::string>()};
      manifest_[entry.uri] = std::move(entry);
    }
  } catch (const nlohmann::json::exception& e) {
    throw StorageFailure("corrupt manifest " + path.string() + ": " + e.what());
  }
}

void SampledSourceStore::save_manifest() const {
  auto json = nlohmann::json::array();
  for (const auto& [uri, entry] : manifest_) {
    json.push_back({{"uri", entry.uri},
                    {"id", entry.id},
                    {"sha256", entry.sha256},
                    {"fetched_at", entry.fetched_at}});
  }
  write_atomically(root_ / "manifest.json", json.dump(2) + "\n");
}

std::string SampledSourceStore::store(const Document& source) {
  const std::string content = source.utf8_text();
  const std::string digest = sha256_hex(content);
  const std::string local_id = digest.substr(0, kLocalIdLength);
  const std::string uri = source.source_uri.empty() ? source.id : source.source_uri;

  std::lock_guard lock(mutex_);
  auto it = manifest_.find(uri);
  if (it != manifest_.end() && it->second.sha256 == digest &&
      fs::exists(path_for(local_id))) {
    return it->second.id;
  }
  if (!fs::exists(path_for(local_id))) {
    write_atomically(path_for(local_id), content);
  }
  manifest_[uri] = ManifestEntry{uri, local_id, digest, current_timestamp()};
  save_manifest();
  return local_id;
}

Document SampledSourceStore::load(const std::string& local_id) const {
  const fs::path path = path_for(local_id);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageFailure("stored source missing: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ingest_plain_text(buffer.str(), local_id, Origin::SampledWeb,
                           relative_path_for(local_id));
}

std::optional<ManifestEntry> SampledSourceStore::entry_for_uri(
    const std::string& uri) const {
  std::lock_guard lock(mutex_);
  auto it = manifest_.find(uri);
  if (it == manifest_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, ManifestEntry> SampledSourceStore::manifest() const {
  std::lock_guard lock(mutex_);
  return manifest_;
}

std::string store_sampled_source(SampledSourceStore& store,
                                 const Document& source) {
  return store.store(source);
}

}  // namespace antiplag
