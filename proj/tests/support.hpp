#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "spdf/corpus.hpp"

namespace testing_support {

// Directory removed when the object goes out of scope.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("spdf-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline void write(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

inline spdf::corpus::Document doc(const std::string& assignment, const std::string& person, const std::string& content) {
  spdf::corpus::Document d;
  d.id = spdf::corpus::document_id(assignment, person);
  d.author = person;
  d.assignment = assignment;
  d.content = content;
  d.content_hash = spdf::corpus::content_digest(content);
  return d;
}

// Manifest with people p1..pn and the given assignments (generic-code, weights 1/0/0).
inline spdf::corpus::Manifest manifest(std::size_t people, std::initializer_list<std::string> assignments,
                                       const std::string& profile = "generic-code") {
  spdf::corpus::Manifest m;
  for (const auto& a : assignments) {
    spdf::corpus::Assignment asg;
    asg.id = a;
    asg.title = a;
    asg.language_profile = profile;
    m.assignments.push_back(asg);
  }
  for (std::size_t i = 1; i <= people; ++i) {
    spdf::corpus::Person p;
    p.id = "p" + std::to_string(i);
    p.full_name = "Person " + std::to_string(i);
    m.people.push_back(p);
  }
  return m;
}

inline std::filesystem::path demo_fixture() { return std::filesystem::path(SPDF_FIXTURE_DIR) / "demo"; }

}  // namespace testing_support
