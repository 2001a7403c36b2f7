#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "dagon/dagon.hpp"

namespace dagon::testing {

// Directory removed when the object goes out of scope.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("dagon-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Corpus corpus_of(std::initializer_list<std::string> texts, std::string name = "test") {
  Corpus c(std::move(name));
  std::size_t i = 0;
  for (const auto& t : texts) {
    Post p;
    p.post_id = "p" + std::to_string(i++);
    p.text = t;
    c.add(std::move(p));
  }
  return c;
}

// Default synthetic corpus, generated once per test binary.
inline const SyntheticData& default_synthetic() {
  static const SyntheticData data = generate_synthetic(SyntheticSpec{});
  return data;
}

inline const Experiment& default_experiment() {
  static const Experiment ex(default_synthetic().domain, default_synthetic().background,
                             default_synthetic().substance_seeds(), default_synthetic().effect_seeds(),
                             default_synthetic().gold(), TerminologyConfig{});
  return ex;
}

}  // namespace dagon::testing
