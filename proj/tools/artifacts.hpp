#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fullersim::cli {

// Files written by one command. Until commit() succeeds, destruction removes
// every file this run created; commit() records each file in manifest.json
// beside it (existing entries for other files are kept).
class Artifacts {
 public:
  Artifacts(std::string command, std::string config_digest);
  ~Artifacts();
  Artifacts(const Artifacts&) = delete;
  Artifacts& operator=(const Artifacts&) = delete;

  const std::string& digest() const noexcept { return digest_; }

  void write(const std::filesystem::path& path, const std::string& content);
  // A file this run did not write but depends on (e.g. a reused cache).
  void reference(const std::filesystem::path& path);
  void commit();

 private:
  struct Entry {
    std::filesystem::path path;
    bool created;
  };
  std::string command_;
  std::string digest_;
  std::vector<Entry> entries_;
  bool committed_ = false;
};

}  // namespace fullersim::cli
