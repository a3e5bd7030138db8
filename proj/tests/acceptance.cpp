// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cli_runner.hpp"
#include "oracles.hpp"
#include "ranking_tables.hpp"
#include "sim_reference.hpp"
#include "spdf/cohort.hpp"
#include "spdf/glmstats.hpp"
#include "spdf/simengine.hpp"
#include "spdf/socialgraph.hpp"
#include "spdf/text.hpp"
#include "support.hpp"

using namespace spdf;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets, fixed here so the run is self-describing.
constexpr double kLrtLow = 5.4e-8, kLrtHigh = 6.6e-8;
constexpr double kCoefTol = 1e-6;
constexpr double kDevianceTol = 1e-8;
constexpr double kNestingTol = 1e-8;
constexpr double kPValueRelTol = 1e-9;
constexpr double kCohortSignalRate = 0.95;
constexpr double kCohortNullRate = 0.15;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Outcome()> run;
};

#define CHECK_OR_FAIL(cond, msg)        \
  do {                                  \
    if (!(cond)) {                      \
      std::ostringstream os_;           \
      os_ << msg;                       \
      return Outcome{false, os_.str()}; \
    }                                   \
  } while (0)

glm::Vector draw_bernoulli(std::mt19937_64& rng, const glm::Vector& eta) {
  glm::Vector y(eta.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index i = 0; i < eta.size(); ++i) y(i) = unit(rng) < oracle::logistic(eta(i)) ? 1.0 : 0.0;
  return y;
}

Outcome lrt_arithmetic() {
  const auto r = glm::lrt_from_deviances(48.932, 12.479, 3);
  std::ostringstream d;
  d << "diff=" << r.deviance_diff << " df=" << r.df << " p=" << r.p_value;
  return {r.df == 3 && r.p_value >= kLrtLow && r.p_value <= kLrtHigh, d.str()};
}

Outcome glm_oracles() {
  std::mt19937_64 rng(20140401);
  int configs = 0;
  double worst_coef = 0;
  while (configs < 150) {
    const int n0 = 2 + static_cast<int>(rng() % 40), n1 = 2 + static_cast<int>(rng() % 40);
    const int a = 1 + static_cast<int>(rng() % static_cast<unsigned>(n0 - 1));
    const int b = 1 + static_cast<int>(rng() % static_cast<unsigned>(n1 - 1));
    glm::Vector x(n0 + n1), y(n0 + n1);
    for (int i = 0; i < n0 + n1; ++i) {
      x(i) = i < n0 ? 0 : 1;
      y(i) = i < n0 ? (i < a) : (i - n0 < b);
    }
    const auto m = glm::fit_logistic(glm::make_design({"x"}, {x}), y);
    const double b0 = std::log(static_cast<double>(a) / (n0 - a));
    const double b1 = std::log(static_cast<double>(b) / (n1 - b)) - b0;
    worst_coef = std::max({worst_coef, std::abs(m.coefficients(0) - b0), std::abs(m.coefficients(1) - b1)});
    CHECK_OR_FAIL(m.converged, "2x2 fit did not converge: " << a << "/" << n0 << " vs " << b << "/" << n1);
    ++configs;
  }
  CHECK_OR_FAIL(worst_coef <= kCoefTol, "coefficient error " << worst_coef);

  std::normal_distribution<double> normal;
  double worst_dev = 0;
  int datasets = 0;
  while (datasets < 100) {
    const Eigen::Index n = 10 + static_cast<Eigen::Index>(rng() % 40);
    glm::Vector x1(n), x2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x1(i) = normal(rng);
      x2(i) = normal(rng);
    }
    const glm::Vector y = draw_bernoulli(rng, (0.2 + 0.6 * x1.array() - 0.5 * x2.array()).matrix());
    if (y.sum() < 2 || y.sum() > static_cast<double>(n - 2)) continue;
    const auto m = glm::fit_logistic(glm::make_design({"x1", "x2"}, {x1, x2}), y);
    if (m.boundary) continue;
    const double ll = oracle::bernoulli_loglik({y.data(), y.data() + n}, {m.fitted.data(), m.fitted.data() + n});
    worst_dev = std::max(worst_dev, std::abs(m.residual_deviance + 2 * ll));
    ++datasets;
  }
  std::ostringstream d;
  d << configs << " 2x2 configs, max coef err " << worst_coef << "; " << datasets << " datasets, max deviance err "
    << worst_dev;
  return {worst_dev <= kDevianceTol, d.str()};
}

Outcome nesting() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  int datasets = 0;
  double worst_gap = -1e300, worst_rel = 0;
  while (datasets < 200) {
    const Eigen::Index n = 50;
    std::vector<glm::Vector> xs(4, glm::Vector(n));
    for (auto& x : xs)
      for (auto& v : x) v = normal(rng);
    glm::Vector eta = glm::Vector::Constant(n, 0.3 * normal(rng));
    for (const auto& x : xs) eta += 0.5 * normal(rng) * x;
    const glm::Vector y = draw_bernoulli(rng, eta);
    if (y.sum() == 0 || y.sum() == static_cast<double>(n)) continue;
    const int kept = datasets % 4;
    std::vector<std::string> names{"x1", "x2", "x3", "x4"};
    const auto full = glm::fit_logistic(glm::make_design(names, xs), y);
    names.resize(static_cast<std::size_t>(kept));
    auto nd = glm::make_design(names, std::vector<glm::Vector>(xs.begin(), xs.begin() + kept));
    if (kept == 0) nd.x = Eigen::MatrixXd::Ones(n, 1);
    const auto nested = glm::fit_logistic(nd, y);
    const double gap = full.residual_deviance - nested.residual_deviance;
    worst_gap = std::max(worst_gap, gap);
    CHECK_OR_FAIL(gap <= kNestingTol, "dataset " << datasets << ": full deviance exceeds nested by " << gap);
    const auto r = glm::lrt(nested, full);
    const double want = oracle::chi_square_sf(std::max(0.0, -gap), 4 - kept);
    const double rel = std::abs(r.p_value - want) / want;
    worst_rel = std::max(worst_rel, rel);
    CHECK_OR_FAIL(rel <= kPValueRelTol, "dataset " << datasets << ": p " << r.p_value << " vs " << want);
    ++datasets;
  }
  std::ostringstream d;
  d << datasets << " datasets, max(RD_full - RD_nested)=" << worst_gap << ", max p rel err " << worst_rel;
  return {true, d.str()};
}

sim::TokenStream stream_of(std::vector<std::uint64_t> tokens) {
  sim::TokenStream s;
  s.tokens = std::move(tokens);
  return s;
}

Outcome winnowing() {
  std::mt19937_64 rng(4);
  int planted_pairs = 0, oracle_streams = 0;
  for (; planted_pairs < 600; ++planted_pairs) {
    const sim::FingerprintParams params{1 + rng() % 8, 1 + rng() % 8};
    const std::size_t planted = params.w + params.k - 1 + rng() % 4;
    std::vector<std::uint64_t> common(planted);
    for (auto& t : common) t = rng() % 30;
    auto noise = [&] {
      std::vector<std::uint64_t> s(rng() % 120);
      for (auto& t : s) t = 1000 + rng() % 30;
      return s;
    };
    auto a = noise(), b = noise();
    a.insert(a.begin() + static_cast<long>(rng() % (a.size() + 1)), common.begin(), common.end());
    b.insert(b.begin() + static_cast<long>(rng() % (b.size() + 1)), common.begin(), common.end());
    const auto fa = sim::fingerprint(stream_of(a), params);
    const auto fb = sim::fingerprint(stream_of(b), params);
    std::vector<std::uint64_t> shared;
    std::set_intersection(fa.distinct_hashes.begin(), fa.distinct_hashes.end(), fb.distinct_hashes.begin(),
                          fb.distinct_hashes.end(), std::back_inserter(shared));
    CHECK_OR_FAIL(!shared.empty(), "pair " << planted_pairs << " (k=" << params.k << ", w=" << params.w
                                           << ") shares no fingerprint");
    for (const auto* s : {&a, &b}) {
      std::set<std::pair<std::uint64_t, std::size_t>> got;
      for (const auto& p : (s == &a ? fa : fb).prints) got.insert({p.hash, p.position});
      CHECK_OR_FAIL(got == oracle::window_minima(oracle::kgram_hashes(*s, params.k), params.w),
                    "fingerprint differs from window-minima oracle on stream " << oracle_streams);
      ++oracle_streams;
    }
  }
  std::ostringstream d;
  d << planted_pairs << " planted pairs intersect; " << oracle_streams << " streams equal the oracle";
  return {true, d.str()};
}

Outcome similarity_contract() {
  const auto profile = sim::Profile::GenericCode;
  const auto params = sim::default_params(profile);
  auto prints = [&](const std::string& s) { return sim::fingerprint(sim::tokenize(s, profile), params); };
  std::mt19937_64 rng(5);
  const std::vector<std::string> pieces{"int x = 0;", "x += y * 2;", "if (a < b) { return a; }", "while (n--) s++;",
                                        "for (i = 0; i < n; i++) t[i] = i;", "f(g(h));", "return x ^ y;"};
  int docs = 0;
  for (; docs < 200; ++docs) {
    std::string text;
    for (int i = 0; i < 3 + static_cast<int>(rng() % 10); ++i) text += pieces[rng() % pieces.size()] + "\n";
    const auto f = prints(text);
    if (f.distinct_hashes.empty()) continue;
    const auto r = sim::pairwise_similarity("a", f, "b", f);
    CHECK_OR_FAIL(r && r->s == 1.0, "self-similarity below 1 for document " << docs);
  }
  const std::string base = "for (int i = 0; i < n; i++) { total += v[i]; } return total;";
  const auto fi = prints(base);
  const auto fj = prints(base + " while (x > 0) { x = x / 2; if (y) break; } switch (q) { case 1: return 7; }");
  const auto ij = sim::pairwise_similarity("i", fi, "j", fj);
  const auto ji = sim::pairwise_similarity("j", fj, "i", fi);
  CHECK_OR_FAIL(ij && ij->s == 1.0, "contained document: s_ij != 1");
  CHECK_OR_FAIL(ji && ji->s < 1.0, "containing document: s_ji not below 1");
  const auto text_params = sim::default_params(sim::Profile::PlainText);
  const auto x = sim::fingerprint(sim::tokenize("alpha beta gamma delta epsilon", sim::Profile::PlainText), text_params);
  const auto y = sim::fingerprint(sim::tokenize("one two three four five six", sim::Profile::PlainText), text_params);
  CHECK_OR_FAIL(!sim::pairwise_similarity("x", x, "y", y), "zero-overlap pair emitted a record");
  std::ostringstream d;
  d << docs << " self pairs at 1.0; s_ij=" << ij->s << " s_ji=" << ji->s << "; disjoint pair emits nothing";
  return {true, d.str()};
}

Outcome ranking_linearity() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int tables = 0;
  for (; tables < 120; ++tables) {
    const auto t = testing_support::FactorTable::random(rng, 5 + static_cast<std::size_t>(tables % 6));
    const double c = 1.0 - unit(rng);
    CHECK_OR_FAIL(testing_support::ids(t.rank()) == testing_support::ids(t.scaled(c).rank()),
                  "table " << tables << ": order changed under scaling by " << c);
    CHECK_OR_FAIL(testing_support::ids(t.rank(corpus::Weights{1, 0, 0})) ==
                      testing_support::ids(t.rank(corpus::Weights{1, 0, 0}, ranking::Factor::Cs)),
                  "table " << tables << ": weights (1,0,0) differ from cs order");
  }
  return {true, std::to_string(tables) + " tables"};
}

std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> alphabet = {"a", "b", "c", "d", "š", "ö", " "};
  std::string s;
  const std::size_t n = rng() % 31;
  for (std::size_t i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
  return s;
}

Outcome levenshtein() {
  std::mt19937_64 rng(8);
  int pairs = 0;
  for (; pairs < 1200; ++pairs) {
    const auto a = random_text(rng), b = random_text(rng), c = random_text(rng);
    const auto ab = social::levenshtein(a, b);
    CHECK_OR_FAIL(ab == oracle::levenshtein(text::decode_utf8(a), text::decode_utf8(b)), "oracle mismatch on pair " << pairs);
    CHECK_OR_FAIL(ab == social::levenshtein(b, a), "asymmetric on pair " << pairs);
    CHECK_OR_FAIL(social::levenshtein(a, c) <= ab + social::levenshtein(b, c), "triangle violated on pair " << pairs);
  }
  return {true, std::to_string(pairs) + " pairs"};
}

Outcome synthetic_cohort() {
  int signal_hits = 0, null_hits = 0;
  const int seeds = 20;
  double worst_signal_p = 0;
  for (int s = 1; s <= seeds; ++s) {
    cohort::Config cfg;
    cfg.seed = static_cast<std::uint64_t>(s);
    const auto linked = cohort::evaluate(cohort::generate(cfg)).report;
    worst_signal_p = std::max(worst_signal_p, linked.lrt.p_value);
    if (linked.with_social.residual_deviance < linked.without_social.residual_deviance && linked.lrt.p_value < 0.01) {
      ++signal_hits;
    }
    cfg.social_signal = false;
    const auto null = cohort::evaluate(cohort::generate(cfg)).report;
    if (null.lrt.p_value < 0.05) ++null_hits;
  }
  std::ostringstream d;
  d << "linked: " << signal_hits << "/" << seeds << " (worst p " << worst_signal_p << "); null: " << null_hits << "/"
    << seeds << " with p<0.05";
  return {signal_hits >= kCohortSignalRate * seeds && null_hits <= kCohortNullRate * seeds, d.str()};
}

std::string tree_bytes(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string out;
  for (const auto& f : files) out += fs::relative(f, dir).string() + "\n" + testing_support::read_all(f) + "\n";
  return out;
}

Outcome determinism() {
  testing_support::TempDir tmp;
  std::string first;
  for (const char* threads : {"1", "4"}) {
    const auto project = tmp / "run" / "demo";
    fs::remove_all(tmp / "run");
    fs::create_directories(tmp / "run");
    fs::copy(testing_support::demo_fixture(), project, fs::copy_options::recursive);
    bool ok = false;
    const auto transcript =
        testing_support::demo_pipeline(SPDF_CLI_PATH, project, tmp / "run", tmp / "run" / "out",
                                       {"SOURCE_DATE_EPOCH=1700000000", std::string("OMP_NUM_THREADS=") + threads}, &ok);
    CHECK_OR_FAIL(ok, "pipeline failed:\n" << transcript);
    fs::remove(tmp / "run" / "cli.out");
    fs::remove(tmp / "run" / "cli.err");
    const auto all = transcript + tree_bytes(tmp / "run");
    if (first.empty()) {
      first = all;
    } else {
      CHECK_OR_FAIL(all == first, "second run differs from the first");
    }
  }
  return {true, std::to_string(first.size()) + " bytes of output, workspace and exports identical (1 vs 4 threads)"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "LRT arithmetic 48.932 vs 12.479 on 3 df gives p in [5.4e-8, 6.6e-8]", 1, lrt_arithmetic},
      {2, "IRLS matches closed-form 2x2 fits (1e-6) and direct log-likelihood (1e-8)", 10, glm_oracles},
      {3, "nested deviance ordering (1e-8) and LRT p-values vs chi-square oracle (1e-9 rel)", 30, nesting},
      {4, "planted substrings always share fingerprints; winnowing equals window-minima oracle", 30, winnowing},
      {5, "similarity contract: self 1.0, directed containment, no record on zero overlap", 10, similarity_contract},
      {6, "ranking order invariant to common scaling; weights (1,0,0) give cs order", 10, ranking_linearity},
      {7, "Levenshtein equals DP oracle, symmetric, triangle inequality", 10, levenshtein},
      {8, "synthetic cohort: social model wins in >=95% of linked seeds, <=15% false alarms", 120, synthetic_cohort},
      {9, "CLI pipeline on the demo tree is byte-identical across runs", 60, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " -- " << o.detail << " ["
              << timing << "]" << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
