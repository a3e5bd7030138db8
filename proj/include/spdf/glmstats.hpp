#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "spdf/ranking.hpp"
#include "spdf/socialgraph.hpp"

namespace spdf::glm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Model matrix with named columns; column 0 is the intercept.
struct Design {
  Matrix x;
  std::vector<std::string> columns;

  Eigen::Index rows() const { return x.rows(); }
  Eigen::Index cols() const { return x.cols(); }
};

/// Adds the intercept column in front of the given predictor columns.
Design make_design(const std::vector<std::string>& names, const std::vector<Vector>& predictors);

struct FitOptions {
  double tolerance = 1e-10;  // |dev - dev_old| / (|dev| + 0.1)
  int max_iterations = 50;
};

struct GlmModel {
  std::string formula;
  std::vector<std::string> terms;  // "(Intercept)" first
  Vector coefficients;
  Vector standard_errors;
  Vector fitted;  // success probabilities
  double residual_deviance = 0.0;
  double null_deviance = 0.0;
  double log_likelihood = 0.0;
  int df_residual = 0;
  int df_null = 0;
  bool converged = false;
  bool boundary = false;  // some fitted probability is numerically 0 or 1
  int iterations = 0;
  Vector successes;
  Vector trials;
  std::vector<std::string> warnings;

  Eigen::Index parameters() const { return coefficients.size(); }
  /// Two-sided Wald p-values.
  Vector wald_p_values() const;
};

/// Binomial logistic regression fitted by IRLS. `successes[i]` out of `trials[i]`.
GlmModel fit_binomial(const Design& design, const Vector& successes, const Vector& trials, FitOptions opts = {});

/// Bernoulli responses.
GlmModel fit_logistic(const Design& design, std::span<const bool> y, FitOptions opts = {});
GlmModel fit_logistic(const Design& design, const Vector& y, FitOptions opts = {});

/// Binomial deviance of probabilities `mu` against the observed counts.
double binomial_deviance(const Vector& successes, const Vector& trials, const Vector& mu);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double df);

struct LrtResult {
  double deviance_diff = 0.0;
  int df = 0;
  double p_value = 1.0;
};

LrtResult lrt_from_deviances(double nested_deviance, double full_deviance, int df);
LrtResult lrt(const GlmModel& nested, const GlmModel& full);

struct DispersionTest {
  double pearson_chi2 = 0.0;
  int df = 0;
  double dispersion = 1.0;  // Pearson chi-square / df
  double p_value = 1.0;     // upper tail of chi-square(df) at the Pearson statistic
};

DispersionTest dispersion_test(const GlmModel& model, const Design& design, const Vector& successes,
                               const Vector& trials);
DispersionTest dispersion_test(const GlmModel& model, const Design& design, std::span<const bool> y);

struct Diagnostics {
  Vector hat_values;
  Vector studentized_residuals;
  Vector cooks_d;
  double dispersion = 1.0;
  double overdispersion_p = 1.0;
  std::vector<Eigen::Index> high_leverage;  // hat > 2p/n
  std::vector<Eigen::Index> influential;    // Cook's D > 4/n
};

Diagnostics influence_diagnostics(const GlmModel& model, const Design& design, const Vector& successes,
                                  const Vector& trials);
Diagnostics influence_diagnostics(const GlmModel& model, const Design& design, std::span<const bool> y);

struct FeatureRow {
  std::string pair_id;
  double match_cs = 0.0;
  bool match_fb = false;
  bool match_tw = false;
  std::uint64_t se_hits = 0;
  bool cheat_confirmed = false;

  bool operator==(const FeatureRow&) const = default;
};

/// Decided assessments only; not_checked rows are dropped.
std::vector<FeatureRow> build_features(std::span<const ranking::PairAssessment> rows,
                                       const social::ConnectionIndex& connections);

void write_features_csv(std::ostream& out, std::span<const FeatureRow> rows);
std::vector<FeatureRow> read_features_csv(std::istream& in);

/// check_woSocio: cheat_confirmed ~ match_cs.
Design design_without_social(std::span<const FeatureRow> rows);
/// check_wSocio: cheat_confirmed ~ match_cs + match_fb + match_tw + se_hits.
Design design_with_social(std::span<const FeatureRow> rows);

inline constexpr std::size_t kMinDecidedPairs = 10;

struct ComparisonReport {
  std::size_t rows = 0;
  std::size_t confirmed = 0;
  GlmModel without_social;
  GlmModel with_social;
  LrtResult lrt;
  DispersionTest dispersion_without;
  DispersionTest dispersion_with;
  std::optional<Diagnostics> diagnostics_without;  // absent when the weighted cross-product is singular
  std::optional<Diagnostics> diagnostics_with;
  std::vector<std::string> warnings;
};

ComparisonReport compare_models(std::span<const FeatureRow> rows, FitOptions opts = {});

nlohmann::json model_to_json(const GlmModel& m);
nlohmann::json report_to_json(const ComparisonReport& r);

}  // namespace spdf::glm
