#include <benchmark/benchmark.h>
#include <omp.h>

#include "spdf/cohort.hpp"
#include "spdf/simengine.hpp"

using namespace spdf;

namespace {

// One assignment of a synthetic class with `people` authors.
const corpus::Project& project_of(std::size_t people) {
  static std::map<std::size_t, corpus::Project> cache;
  auto it = cache.find(people);
  if (it == cache.end()) {
    cohort::Config cfg;
    cfg.seed = 42;
    cfg.people = people;
    cfg.assignments = 1;
    it = cache.emplace(people, cohort::generate(cfg).project).first;
  }
  return it->second;
}

std::vector<sim::SimilarityInput> inputs_of(std::size_t people) {
  const auto& p = project_of(people);
  const auto& a = p.assignments().front();
  const auto profile = sim::parse_profile(a.language_profile);
  std::vector<sim::SimilarityInput> out;
  for (const auto* d : p.documents_for(a.id)) {
    out.push_back({d->id, d->author, sim::fingerprint(sim::tokenize(d->content, profile), sim::default_params(profile))});
  }
  return out;
}

void BM_AllPairsSerial(benchmark::State& state) {
  const auto inputs = inputs_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sim::all_pairs_serial(inputs));
  state.counters["pairs"] = static_cast<double>(inputs.size() * (inputs.size() - 1));
}

void BM_AllPairsParallel(benchmark::State& state) {
  const auto inputs = inputs_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sim::all_pairs(inputs));
  state.counters["pairs"] = static_cast<double>(inputs.size() * (inputs.size() - 1));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_AssignmentSerial(benchmark::State& state) {
  const auto& p = project_of(static_cast<std::size_t>(state.range(0)));
  const auto aid = p.assignments().front().id;
  for (auto _ : state) benchmark::DoNotOptimize(sim::all_pairs_similarity_serial(p, aid));
}

void BM_AssignmentParallel(benchmark::State& state) {
  const auto& p = project_of(static_cast<std::size_t>(state.range(0)));
  const auto aid = p.assignments().front().id;
  for (auto _ : state) benchmark::DoNotOptimize(sim::all_pairs_similarity(p, aid));
  state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_AllPairsSerial)->Arg(40)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AllPairsParallel)->Arg(40)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssignmentSerial)->Arg(40)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssignmentParallel)->Arg(40)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
