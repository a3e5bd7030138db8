#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "spdf/error.hpp"
#include "spdf/glmstats.hpp"

using namespace spdf;
using glm::Design;
using glm::Vector;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

// Bernoulli rows from a logistic model with the given linear predictor.
Vector draw_bernoulli(std::mt19937_64& rng, const Vector& eta) {
  Vector y(eta.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index i = 0; i < eta.size(); ++i) y(i) = unit(rng) < oracle::logistic(eta(i)) ? 1.0 : 0.0;
  return y;
}

double draw_beta(std::mt19937_64& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
  const double x = ga(rng);
  return x / (x + gb(rng));
}

std::string error_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Fit, InterceptOnly) {
  Design design;
  design.x = Eigen::MatrixXd::Ones(4, 1);
  design.columns = {"(Intercept)"};
  const auto m = glm::fit_logistic(design, vec({1, 1, 0, 0}));
  EXPECT_TRUE(m.converged);
  EXPECT_NEAR(m.coefficients(0), 0.0, 1e-12);
  EXPECT_NEAR(m.residual_deviance, 8 * std::log(2.0), 1e-10);
  EXPECT_NEAR(m.null_deviance, 8 * std::log(2.0), 1e-10);
  EXPECT_EQ(m.df_residual, 3);
}

TEST(Fit, BinaryPredictorLogOdds) {
  const auto design = glm::make_design({"x"}, {vec({0, 0, 0, 0, 1, 1, 1, 1})});
  const auto m = glm::fit_logistic(design, vec({1, 0, 0, 0, 1, 1, 1, 0}));
  ASSERT_TRUE(m.converged);
  EXPECT_NEAR(m.coefficients(0), std::log(1.0 / 3), 1e-8);
  EXPECT_NEAR(m.coefficients(1), std::log(9.0), 1e-8);
  EXPECT_EQ(m.terms, (std::vector<std::string>{"(Intercept)", "x"}));
}

TEST(Fit, MatchesClosedFormTwoByTwo) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const int n0 = 2 + static_cast<int>(rng() % 30), n1 = 2 + static_cast<int>(rng() % 30);
    const int a = 1 + static_cast<int>(rng() % static_cast<unsigned>(n0 - 1));
    const int b = 1 + static_cast<int>(rng() % static_cast<unsigned>(n1 - 1));
    Vector x(n0 + n1), y(n0 + n1);
    for (int i = 0; i < n0 + n1; ++i) {
      x(i) = i < n0 ? 0 : 1;
      y(i) = i < n0 ? (i < a ? 1 : 0) : (i - n0 < b ? 1 : 0);
    }
    // Bernoulli rows presented in a shuffled order.
    std::vector<int> perm(static_cast<std::size_t>(n0 + n1));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Vector xs(x.size()), ys(y.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      xs(static_cast<Eigen::Index>(i)) = x(perm[i]);
      ys(static_cast<Eigen::Index>(i)) = y(perm[i]);
    }
    const auto m = glm::fit_logistic(glm::make_design({"x"}, {xs}), ys);
    const double b0 = std::log(static_cast<double>(a) / (n0 - a));
    const double b1 = std::log(static_cast<double>(b) / (n1 - b)) - b0;
    ASSERT_TRUE(m.converged);
    ASSERT_NEAR(m.coefficients(0), b0, 1e-6) << n0 << ' ' << a << ' ' << n1 << ' ' << b;
    ASSERT_NEAR(m.coefficients(1), b1, 1e-6) << n0 << ' ' << a << ' ' << n1 << ' ' << b;
  }
}

TEST(Fit, DevianceMatchesDirectLikelihood) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 8 + static_cast<Eigen::Index>(rng() % 30);
    Vector x1(n), x2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x1(i) = normal(rng);
      x2(i) = normal(rng);
    }
    const auto design = glm::make_design({"x1", "x2"}, {x1, x2});
    const Vector y = draw_bernoulli(rng, (0.3 + 0.7 * x1.array() - 0.4 * x2.array()).matrix());
    if (y.sum() == 0 || y.sum() == static_cast<double>(n)) continue;
    const auto m = glm::fit_logistic(design, y);
    if (m.boundary) continue;
    // Saturated Bernoulli log-likelihood is zero.
    const double ll = oracle::bernoulli_loglik(to_std(y), to_std(m.fitted));
    EXPECT_NEAR(m.residual_deviance, -2 * ll, 1e-8);
    EXPECT_NEAR(m.log_likelihood, ll, 1e-8);
    const double p0 = y.mean();
    EXPECT_NEAR(m.null_deviance, -2 * oracle::bernoulli_loglik(to_std(y), std::vector<double>(n, p0)), 1e-8);
  }
}

TEST(Fit, GroupedAndUngroupedAgree) {
  const auto grouped = glm::fit_binomial(glm::make_design({"x"}, {vec({0, 1})}), vec({1, 3}), vec({4, 4}));
  const auto rows = glm::fit_logistic(glm::make_design({"x"}, {vec({0, 0, 0, 0, 1, 1, 1, 1})}),
                                      vec({1, 0, 0, 0, 1, 1, 1, 0}));
  EXPECT_NEAR(grouped.coefficients(0), rows.coefficients(0), 1e-9);
  EXPECT_NEAR(grouped.coefficients(1), rows.coefficients(1), 1e-9);
  EXPECT_NEAR(grouped.standard_errors(1), rows.standard_errors(1), 1e-9);
}

TEST(Fit, AffineRescalingKeepsFittedProbabilities) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    Vector x(40);
    for (auto& v : x) v = normal(rng);
    const Vector y = draw_bernoulli(rng, (0.5 * x).eval());
    if (y.sum() < 3 || y.sum() > 37) continue;
    const auto a = glm::fit_logistic(glm::make_design({"x"}, {x}), y);
    const auto b = glm::fit_logistic(glm::make_design({"x"}, {Vector((10 * x.array() + 3).matrix())}), y);
    if (a.boundary) continue;
    for (Eigen::Index i = 0; i < x.size(); ++i) ASSERT_NEAR(a.fitted(i), b.fitted(i), 1e-8);
    ASSERT_NEAR(a.coefficients(1), 10 * b.coefficients(1), 1e-6);
  }
}

TEST(Fit, AllIdenticalResponsesFlagged) {
  const auto design = glm::make_design({"x"}, {vec({0.1, 0.5, 0.9, 0.3, 0.7})});
  for (double v : {0.0, 1.0}) {
    const auto m = glm::fit_logistic(design, Vector::Constant(5, v));
    EXPECT_TRUE(m.boundary || !m.converged);
    EXPECT_FALSE(m.warnings.empty());
    EXPECT_EQ(m.coefficients.size(), 2);
  }
}

TEST(Fit, SeparationDoesNotCrash) {
  const auto design = glm::make_design({"x"}, {vec({1, 2, 3, 4, 5, 6})});
  const auto m = glm::fit_logistic(design, vec({0, 0, 0, 1, 1, 1}));
  EXPECT_TRUE(m.boundary || !m.converged);
  EXPECT_LT(m.residual_deviance, 1e-3);
}

TEST(Fit, RankDeficiencyNamesColumns) {
  const Vector a = vec({0.1, 0.4, 0.3, 0.9, 0.5, 0.2});
  const Vector b = vec({1, 0, 1, 1, 0, 0});
  const auto msg = error_message([&] {
    glm::fit_logistic(glm::make_design({"match_cs", "match_fb", "match_cs_copy"}, {a, b, a}), vec({1, 0, 1, 1, 0, 0}));
  });
  EXPECT_NE(msg.find("match_cs"), std::string::npos) << msg;
  EXPECT_NE(msg.find("match_cs_copy"), std::string::npos) << msg;
  EXPECT_EQ(msg.find("match_fb"), std::string::npos) << msg;

  const auto constant = error_message([&] {
    glm::fit_logistic(glm::make_design({"k"}, {Vector::Constant(6, 2.0)}), vec({1, 0, 1, 1, 0, 0}));
  });
  EXPECT_NE(constant.find("(Intercept)"), std::string::npos) << constant;
  EXPECT_NE(constant.find("k"), std::string::npos) << constant;
}

TEST(Fit, InputErrors) {
  const auto design = glm::make_design({"x"}, {vec({0, 1, 2})});
  EXPECT_THROW(glm::fit_logistic(design, vec({0, 1})), Error);
  EXPECT_THROW(glm::fit_logistic(design, vec({0, 2, 1})), Error);
  EXPECT_THROW(glm::fit_logistic(glm::make_design({"x"}, {vec({0, NAN, 2})}), vec({0, 1, 1})), Error);
  EXPECT_THROW(glm::fit_binomial(design, vec({0, 3, 1}), vec({2, 2, 2})), Error);
  EXPECT_THROW(glm::fit_logistic(glm::make_design({"x", "z"}, {vec({0, 1}), vec({1, 0})}), vec({0, 1})), Error);
  EXPECT_THROW(glm::make_design({"x", "z"}, {vec({0, 1}), vec({1, 0, 1})}), Error);
}

TEST(ChiSquare, MatchesReferenceValues) {
  struct Case {
    double x, df, p;
  };
  // Regularized upper incomplete gamma at 30 digits.
  for (const auto& c : std::vector<Case>{{36.453, 3, 6.0061559548825775e-8},
                                         {3.84, 1, 0.050043521248705103},
                                         {10, 7, 0.18857346751345007},
                                         {0.5, 5, 0.99212329323262959},
                                         {55, 12, 1.8099213208598912e-7},
                                         {1e-3, 2, 0.99950012497916927}}) {
    EXPECT_NEAR(glm::chi_square_sf(c.x, c.df) / c.p, 1.0, 1e-12) << c.x << ' ' << c.df;
  }
}

TEST(ChiSquare, MatchesClosedFormOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int df = 1 + trial % 11;
    const double x = 80 * unit(rng) * unit(rng);
    const double want = oracle::chi_square_sf(x, df);
    ASSERT_NEAR(glm::chi_square_sf(x, df) / want, 1.0, 1e-9) << x << ' ' << df;
  }
  EXPECT_EQ(glm::chi_square_sf(0, 3), 1.0);
  EXPECT_THROW(glm::chi_square_sf(1, 0), Error);
  EXPECT_THROW(glm::chi_square_sf(NAN, 1), Error);
}

TEST(Lrt, DevianceDifferences) {
  const auto reported = glm::lrt_from_deviances(48.932, 12.479, 3);
  EXPECT_NEAR(reported.deviance_diff, 36.453, 1e-9);
  EXPECT_EQ(reported.df, 3);
  EXPECT_GE(reported.p_value, 5.4e-8);
  EXPECT_LE(reported.p_value, 6.6e-8);

  EXPECT_NEAR(glm::lrt_from_deviances(10.0, 6.16, 1).p_value, 0.050, 1e-3);
  const auto floored = glm::lrt_from_deviances(5.0, 5.0 + 1e-12, 2);
  EXPECT_EQ(floored.deviance_diff, 0.0);
  EXPECT_EQ(floored.p_value, 1.0);
  EXPECT_THROW(glm::lrt_from_deviances(5, 4, 0), Error);
}

TEST(Lrt, ModelChecks) {
  const Vector x = vec({0.1, 0.4, 0.3, 0.9, 0.5, 0.2, 0.8, 0.6});
  const Vector z = vec({1, 0, 1, 1, 0, 0, 1, 0});
  const Vector y = vec({0, 0, 1, 1, 0, 1, 1, 0});
  const auto small = glm::fit_logistic(glm::make_design({"x"}, {x}), y);
  const auto big = glm::fit_logistic(glm::make_design({"x", "z"}, {x, z}), y);
  const auto other = glm::fit_logistic(glm::make_design({"z"}, {z}), y);

  const auto same = glm::lrt(small, small);
  EXPECT_EQ(same.deviance_diff, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
  const auto r = glm::lrt(small, big);
  EXPECT_EQ(r.df, 1);
  EXPECT_NEAR(r.deviance_diff, small.residual_deviance - big.residual_deviance, 1e-12);
  EXPECT_THROW(glm::lrt(small, other), Error);
  EXPECT_THROW(glm::lrt(big, small), Error);
  const auto shifted = glm::fit_logistic(glm::make_design({"x", "z"}, {x, z}), vec({1, 0, 1, 1, 0, 1, 1, 0}));
  EXPECT_THROW(glm::lrt(small, shifted), Error);
}

TEST(Lrt, NestedModelsOverRandomData) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 250; ++trial) {
    const Eigen::Index n = 50;
    std::vector<Vector> xs(4, Vector(n));
    for (auto& x : xs)
      for (auto& v : x) v = normal(rng);
    Vector eta = Vector::Constant(n, 0.2 * normal(rng));
    for (const auto& x : xs) eta += 0.5 * normal(rng) * x;
    const Vector y = draw_bernoulli(rng, eta);
    if (y.sum() == 0 || y.sum() == static_cast<double>(n)) continue;

    const auto full = glm::fit_logistic(glm::make_design({"x1", "x2", "x3", "x4"}, xs), y);
    const int kept = trial % 4;
    std::vector<std::string> names{"x1", "x2", "x3", "x4"};
    names.resize(static_cast<std::size_t>(kept));
    auto nested_design = glm::make_design(names, std::vector<Vector>(xs.begin(), xs.begin() + kept));
    if (kept == 0) nested_design.x = Eigen::MatrixXd::Ones(n, 1);
    const auto nested = glm::fit_logistic(nested_design, y);

    ASSERT_LE(full.residual_deviance, nested.residual_deviance + 1e-8) << "trial " << trial;
    const auto r = glm::lrt(nested, full);
    ASSERT_EQ(r.df, 4 - kept);
    const double want = oracle::chi_square_sf(std::max(0.0, nested.residual_deviance - full.residual_deviance), r.df);
    ASSERT_NEAR(r.p_value / want, 1.0, 1e-9) << "trial " << trial;
  }
}

TEST(Dispersion, CalibratedBinomialData) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  const Eigen::Index groups = 300;
  Vector x(groups), s(groups), m = Vector::Constant(groups, 20);
  for (Eigen::Index i = 0; i < groups; ++i) {
    x(i) = unif(rng);
    std::binomial_distribution<int> draw(20, oracle::logistic(0.3 + 0.8 * x(i)));
    s(i) = draw(rng);
  }
  const auto design = glm::make_design({"x"}, {x});
  const auto model = glm::fit_binomial(design, s, m);
  const auto t = glm::dispersion_test(model, design, s, m);
  EXPECT_EQ(t.df, groups - 2);
  EXPECT_GE(t.dispersion, 0.7);
  EXPECT_LE(t.dispersion, 1.3);
  EXPECT_GT(t.p_value, 0.05);
}

TEST(Dispersion, BetaBinomialInflation) {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  const Eigen::Index groups = 300;
  const int trials = 20;
  // Intra-class correlation rho gives dispersion 1 + (m - 1) rho = 3.
  const double rho = 2.0 / (trials - 1);
  const double concentration = 1.0 / rho - 1.0;
  Vector x(groups), s(groups), m = Vector::Constant(groups, trials);
  for (Eigen::Index i = 0; i < groups; ++i) {
    x(i) = unif(rng);
    const double p = oracle::logistic(0.3 + 0.8 * x(i));
    std::binomial_distribution<int> draw(trials, draw_beta(rng, p * concentration, (1 - p) * concentration));
    s(i) = draw(rng);
  }
  const auto design = glm::make_design({"x"}, {x});
  const auto t = glm::dispersion_test(glm::fit_binomial(design, s, m), design, s, m);
  EXPECT_GT(t.dispersion, 2.0);
  EXPECT_LT(t.p_value, 1e-6);
}

TEST(Dispersion, NeedsResidualDegreesOfFreedom) {
  const auto design = glm::make_design({"x"}, {vec({0, 1})});
  const auto m = glm::fit_binomial(design, vec({1, 2}), vec({3, 3}));
  EXPECT_THROW(glm::dispersion_test(m, design, vec({1, 2}), vec({3, 3})), Error);
}

TEST(Diagnostics, HatValuesSumToParameters) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    Vector x1(30), x2(30);
    for (auto& v : x1) v = normal(rng);
    for (auto& v : x2) v = normal(rng);
    const Vector y = draw_bernoulli(rng, (0.4 * x1 - 0.3 * x2).eval());
    if (y.sum() < 3 || y.sum() > 27) continue;
    const auto design = glm::make_design({"x1", "x2"}, {x1, x2});
    const auto m = glm::fit_logistic(design, y);
    const auto d = glm::influence_diagnostics(m, design, y, Vector::Ones(30));
    ASSERT_NEAR(d.hat_values.sum(), 3.0, 1e-6);
    for (double h : d.hat_values) {
      ASSERT_GE(h, 0.0);
      ASSERT_LE(h, 1.0);
    }
    for (double c : d.cooks_d) ASSERT_GE(c, 0.0);
  }
}

TEST(Diagnostics, BalancedRowsShareLeverage) {
  Design design;
  design.x = Eigen::MatrixXd::Ones(10, 1);
  design.columns = {"(Intercept)"};
  const Vector y = vec({1, 0, 1, 0, 1, 0, 1, 0, 1, 0});
  const auto m = glm::fit_logistic(design, y);
  const auto d = glm::influence_diagnostics(m, design, y, Vector::Ones(10));
  for (double h : d.hat_values) EXPECT_NEAR(h, 0.1, 1e-12);
  EXPECT_TRUE(d.high_leverage.empty());
}

TEST(Diagnostics, PlantedOutlierHasLargestCooksDistance) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(100);
    for (auto& v : x) v = normal(rng);
    Vector y = draw_bernoulli(rng, (1.5 * x).eval());
    const Eigen::Index planted = static_cast<Eigen::Index>(rng() % 100);
    x(planted) = 3.5;
    y(planted) = 0;
    const auto design = glm::make_design({"x"}, {x});
    const auto m = glm::fit_logistic(design, y);
    const auto d = glm::influence_diagnostics(m, design, y, Vector::Ones(100));
    Eigen::Index arg = 0;
    d.cooks_d.maxCoeff(&arg);
    EXPECT_EQ(arg, planted) << "trial " << trial;
    EXPECT_NE(std::find(d.influential.begin(), d.influential.end(), planted), d.influential.end());
    ++checked;
  }
  EXPECT_EQ(checked, 20);
}

TEST(Diagnostics, StudentizedResidualMatchesDeletion) {
  // The deletion residual approximation tracks the deviance change when a row is dropped.
  const Vector x = vec({-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2, 2.5, -0.2, 0.3});
  const Vector y = vec({0, 0, 1, 0, 0, 1, 1, 0, 1, 1, 1, 0});
  const auto design = glm::make_design({"x"}, {x});
  const auto m = glm::fit_logistic(design, y);
  const auto d = glm::influence_diagnostics(m, design, y, Vector::Ones(12));
  for (Eigen::Index i = 0; i < 12; ++i) {
    Vector xs(11), ys(11);
    for (Eigen::Index j = 0, k = 0; j < 12; ++j) {
      if (j == i) continue;
      xs(k) = x(j);
      ys(k++) = y(j);
    }
    const auto dropped = glm::fit_logistic(glm::make_design({"x"}, {xs}), ys);
    const double change = m.residual_deviance - dropped.residual_deviance;
    EXPECT_NEAR(d.studentized_residuals(i) * d.studentized_residuals(i), change, 0.35 * change + 0.1) << i;
    EXPECT_EQ(d.studentized_residuals(i) > 0, y(i) > m.fitted(i));
  }
}

namespace {

std::vector<glm::FeatureRow> feature_rows(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<glm::FeatureRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    glm::FeatureRow r;
    r.pair_id = "a:p" + std::to_string(i) + ":q";
    r.match_cs = unit(rng);
    r.match_fb = unit(rng) < 0.4;
    r.match_tw = unit(rng) < 0.3;
    r.se_hits = rng() % 7;
    r.cheat_confirmed = unit(rng) < oracle::logistic(-1 + 2 * r.match_cs + (r.match_fb ? 1 : 0));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST(Features, MappingFromAssessments) {
  std::vector<social::SocialAction> actions(1);
  actions[0].network = "FB";
  actions[0].activity = social::Activity::MutualFollow;
  actions[0].from = "a";
  actions[0].to = "b";
  const social::ConnectionIndex connections(actions);

  std::vector<ranking::PairAssessment> rows(3);
  rows[0].id = "hw:a:b";
  rows[0].p_i = "a";
  rows[0].p_j = "b";
  rows[0].cs = 0.7;
  rows[0].se_hits = 4;
  rows[0].status = ranking::Status::Confirmed;
  rows[1].id = "hw:a:c";
  rows[1].p_i = "a";
  rows[1].p_j = "c";
  rows[1].cs = 0.2;
  rows[1].status = ranking::Status::Rejected;
  rows[2].id = "hw:b:c";
  rows[2].status = ranking::Status::NotChecked;

  const auto f = glm::build_features(rows, connections);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0], (glm::FeatureRow{"hw:a:b", 0.7, true, false, 4, true}));
  EXPECT_EQ(f[1], (glm::FeatureRow{"hw:a:c", 0.2, false, false, 0, false}));
}

TEST(Features, CsvRoundTrip) {
  std::mt19937_64 rng(4);
  const auto rows = feature_rows(rng, 25);
  std::stringstream s;
  glm::write_features_csv(s, rows);
  EXPECT_EQ(glm::read_features_csv(s), rows);

  std::istringstream bad("pair_id,match_cs,match_fb,match_tw,se_hits,cheat_confirmed\nx,0.5,yes,false,1,true\n");
  const auto msg = error_message([&] { glm::read_features_csv(bad); });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  std::istringstream header("a,b\n");
  EXPECT_THROW(glm::read_features_csv(header), Error);
}

TEST(Compare, RequiresEnoughDecidedPairs) {
  std::mt19937_64 rng(6);
  auto rows = feature_rows(rng, 9);
  rows[0].cheat_confirmed = true;
  rows[1].cheat_confirmed = false;
  const auto msg = error_message([&] { glm::compare_models(rows); });
  EXPECT_NE(msg.find("at least 10"), std::string::npos) << msg;

  rows = feature_rows(rng, 20);
  for (auto& r : rows) r.cheat_confirmed = true;
  EXPECT_THROW(glm::compare_models(rows), Error);
}

TEST(Compare, ReportsBothModels) {
  std::mt19937_64 rng(12);
  const auto rows = feature_rows(rng, 120);
  const auto r = glm::compare_models(rows);
  EXPECT_EQ(r.rows, 120u);
  EXPECT_EQ(r.without_social.parameters(), 2);
  EXPECT_EQ(r.with_social.parameters(), 5);
  EXPECT_LE(r.with_social.residual_deviance, r.without_social.residual_deviance + 1e-8);
  EXPECT_EQ(r.lrt.df, 3);
  EXPECT_TRUE(r.diagnostics_with.has_value());
  const auto j = glm::report_to_json(r);
  EXPECT_EQ(j["check_wSocio"]["coefficients"].size(), 5u);
  EXPECT_EQ(j["check_woSocio"]["formula"], "cheat_confirmed ~ match_cs");
  EXPECT_EQ(j["lrt"]["df"], 3);
}

TEST(Compare, DuplicatedSocialColumnsAreRankDeficient) {
  std::mt19937_64 rng(13);
  auto rows = feature_rows(rng, 40);
  for (auto& r : rows) r.match_tw = r.match_fb;
  const auto msg = error_message([&] { glm::compare_models(rows); });
  EXPECT_NE(msg.find("match_fb"), std::string::npos) << msg;
  EXPECT_NE(msg.find("match_tw"), std::string::npos) << msg;
}
