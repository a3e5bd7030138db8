#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "spdf/corpus.hpp"
#include "spdf/glmstats.hpp"

namespace spdf::cohort {

// Seeded synthetic class: people write plain-text essays, some pairs copy from each
// other, and copying clusters may or may not coincide with social clusters.
struct Config {
  std::uint64_t seed = 1;
  bool social_signal = true;  // false: social clusters are drawn independently of copying
  std::size_t people = 40;
  std::size_t assignments = 3;
  std::size_t cluster_size = 4;
  double p_copy_linked = 0.6;
  double p_copy_other = 0.05;
};

struct Cohort {
  corpus::Project project;
  std::string actions_jsonl;                          // handles, as a crawler would record them
  std::map<std::string, std::uint64_t> search_table;  // query string -> hits
  std::set<std::string> copied;                       // planted ground truth, by pair id
};

Cohort generate(const Config& config);

struct Outcome {
  std::size_t pairs = 0;
  std::size_t copied = 0;
  glm::ComparisonReport report;
};

// Runs similarity, social import, search and ranking over the cohort, labels every
// ranked pair from the ground truth and compares the two models.
Outcome evaluate(const Cohort& cohort);

}  // namespace spdf::cohort
