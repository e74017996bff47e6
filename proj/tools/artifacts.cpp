#include "artifacts.hpp"

#include <fstream>
#include <map>

#include "fullersim/error.hpp"
#include "fullersim/kernels.hpp"
#include "json.hpp"
#include "run_config.hpp"

namespace fullersim::cli {

namespace {

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace

Artifacts::Artifacts(std::string command, std::string config_digest)
    : command_(std::move(command)), digest_(std::move(config_digest)) {}

Artifacts::~Artifacts() {
  if (committed_) return;
  for (const auto& e : entries_) {
    if (!e.created) continue;
    std::error_code ec;
    std::filesystem::remove(e.path, ec);
  }
}

void Artifacts::write(const std::filesystem::path& path, const std::string& content) {
  entries_.push_back({path, true});
  write_text(path, content);
}

void Artifacts::reference(const std::filesystem::path& path) { entries_.push_back({path, false}); }

void Artifacts::commit() {
  std::map<std::filesystem::path, std::vector<const Entry*>> by_dir;
  for (const auto& e : entries_) {
    by_dir[std::filesystem::absolute(e.path).parent_path()].push_back(&e);
  }
  for (const auto& [dir, entries] : by_dir) {
    const auto manifest_path = dir / "manifest.json";
    nlohmann::ordered_json manifest;
    if (std::filesystem::is_regular_file(manifest_path)) {
      manifest = nlohmann::ordered_json::parse(read_file(manifest_path), nullptr, false);
      if (manifest.is_discarded() || !manifest.is_object()) manifest = nlohmann::ordered_json();
    }
    manifest["tool"] = "fullersim";
    manifest["version"] = FULLERSIM_VERSION;
    manifest["kernels"] = kernels::active().name;
    auto files = manifest.contains("files") && manifest["files"].is_object()
                     ? manifest["files"]
                     : nlohmann::ordered_json::object();
    for (const auto* e : entries) {
      const auto content = read_file(e->path);
      nlohmann::ordered_json entry;
      entry["command"] = command_;
      entry["config_digest"] = digest_;
      entry["bytes"] = content.size();
      entry["fnv1a"] = fnv1a_hex(content);
      files[e->path.filename().string()] = entry;
    }
    // Stable key order.
    nlohmann::ordered_json sorted = nlohmann::ordered_json::object();
    std::map<std::string, nlohmann::ordered_json> ordered;
    for (const auto& item : files.items()) ordered[item.key()] = item.value();
    for (auto& [k, v] : ordered) sorted[k] = v;
    manifest["files"] = sorted;
    write_text(manifest_path, manifest.dump(2) + "\n");
  }
  committed_ = true;
}

}  // namespace fullersim::cli
