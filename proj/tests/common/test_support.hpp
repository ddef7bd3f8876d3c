#pragma once

#include <filesystem>
#include <random>
#include <string>

namespace fluxon::test {

inline std::filesystem::path data_dir() { return FLUXON_TEST_DATA_DIR; }
inline std::filesystem::path config_dir() { return FLUXON_TEST_CONFIG_DIR; }
inline std::string netlist_path(const std::string& name) { return (data_dir() / "netlists" / name).string(); }

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("fluxon-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fluxon::test
