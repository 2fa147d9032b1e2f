#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <string_view>

#include "defistress/error.hpp"

#ifndef DEFISTRESS_DATA_DIR
#error "DEFISTRESS_DATA_DIR must point at the bundled fixtures"
#endif

namespace testing {

inline std::filesystem::path data_file(std::string_view name) {
  return std::filesystem::path(DEFISTRESS_DATA_DIR) / name;
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(std::string_view tag) {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("defistress-" + std::string(tag) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path write(std::string_view name, std::string_view text) const {
    const auto p = path / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <class F>
defistress::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const defistress::Error& e) {
    return e.code();
  }
  FAIL("expected defistress::Error");
  return defistress::ErrorCode::Numeric;
}

}  // namespace testing
