#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>

#include "spdf/error.hpp"
#include "spdf/glmstats.hpp"

namespace spdf::glm {
namespace {

// Logistic inverse link with the odds clamped to [eps, 1/eps].
double inv_logit(double eta) {
  const double odds = std::clamp(std::exp(eta), DBL_EPSILON, 1.0 / DBL_EPSILON);
  return odds / (1.0 + odds);
}

double y_log_y(double y, double mu) { return y > 0.0 ? y * std::log(y / mu) : 0.0; }

void check_finite(const Matrix& x, const char* what) {
  if (!x.allFinite()) fail(ErrorKind::InvalidArgument, std::string("non-finite value in ") + what);
}

// Names every column that takes part in a linear dependency.
void check_rank(const Design& d) {
  Matrix scaled = d.x;
  for (Eigen::Index c = 0; c < scaled.cols(); ++c) {
    const double norm = scaled.col(c).norm();
    if (norm > 0.0) scaled.col(c) /= norm;
  }
  Eigen::JacobiSVD<Matrix> svd(scaled, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * std::max<double>(1.0, sv.size() ? sv(0) : 1.0) * static_cast<double>(std::max(d.rows(), d.cols()));
  std::vector<bool> involved(static_cast<std::size_t>(d.cols()), false);
  bool deficient = false;
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    if (k < sv.size() && sv(k) > tol) continue;
    deficient = true;
    const auto v = svd.matrixV().col(k);
    for (Eigen::Index c = 0; c < d.cols(); ++c) {
      if (std::abs(v(c)) > 1e-6) involved[static_cast<std::size_t>(c)] = true;
    }
  }
  if (!deficient) return;
  std::string names;
  for (std::size_t c = 0; c < involved.size(); ++c) {
    if (!involved[c]) continue;
    if (!names.empty()) names += ", ";
    names += c < d.columns.size() ? d.columns[c] : "column " + std::to_string(c);
  }
  fail(ErrorKind::Numerical, "rank-deficient design; collinear columns: " + names);
}

}  // namespace

Design make_design(const std::vector<std::string>& names, const std::vector<Vector>& predictors) {
  if (names.size() != predictors.size()) fail(ErrorKind::InvalidArgument, "one name per predictor required");
  const Eigen::Index n = predictors.empty() ? 0 : predictors.front().size();
  Design d;
  d.x.resize(n, static_cast<Eigen::Index>(predictors.size()) + 1);
  d.x.col(0).setOnes();
  d.columns.push_back("(Intercept)");
  for (std::size_t k = 0; k < predictors.size(); ++k) {
    if (predictors[k].size() != n) fail(ErrorKind::InvalidArgument, "predictor columns differ in length");
    d.x.col(static_cast<Eigen::Index>(k) + 1) = predictors[k];
    d.columns.push_back(names[k]);
  }
  return d;
}

double binomial_deviance(const Vector& successes, const Vector& trials, const Vector& mu) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double s = successes(i);
    const double m = trials(i);
    dev += 2.0 * (y_log_y(s, m * mu(i)) + y_log_y(m - s, m * (1.0 - mu(i))));
  }
  return dev;
}

Vector GlmModel::wald_p_values() const {
  Vector p(coefficients.size());
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double z = coefficients(k) / standard_errors(k);
    p(k) = std::erfc(std::abs(z) / std::sqrt(2.0));
  }
  return p;
}

GlmModel fit_binomial(const Design& design, const Vector& successes, const Vector& trials, FitOptions opts) {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (successes.size() != n || trials.size() != n) fail(ErrorKind::InvalidArgument, "response length does not match the design");
  if (n < p) fail(ErrorKind::InvalidArgument, "fewer observations than parameters");
  if (p == 0) fail(ErrorKind::InvalidArgument, "empty design");
  check_finite(design.x, "design matrix");
  check_finite(successes, "response");
  check_finite(trials, "trials");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(trials(i) > 0.0) || successes(i) < 0.0 || successes(i) > trials(i)) {
      fail(ErrorKind::InvalidArgument, "responses must satisfy 0 <= successes <= trials, trials > 0");
    }
  }
  check_rank(design);

  const Vector y = successes.cwiseQuotient(trials);
  Vector mu = (successes.array() + 0.5) / (trials.array() + 1.0);
  Vector eta = (mu.array() / (1.0 - mu.array())).log();
  Vector beta = Vector::Zero(p);
  Vector beta_old = beta;
  bool have_beta = false;
  double dev_old = binomial_deviance(successes, trials, mu);

  GlmModel m;
  m.terms = design.columns;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    m.iterations = it;
    const Vector var = (mu.array() * (1.0 - mu.array())).max(1e-300);
    const Vector w = trials.array() * var.array();
    const Vector z = eta.array() + (y - mu).array() / var.array();
    const Vector sw = w.array().sqrt();
    const Matrix a = design.x.array().colwise() * sw.array();
    beta = a.colPivHouseholderQr().solve(Vector(z.cwiseProduct(sw)));

    eta = design.x * beta;
    mu = eta.unaryExpr(&inv_logit);
    double dev = binomial_deviance(successes, trials, mu);

    // Step halving when the update diverges.
    for (int half = 0; have_beta && (!std::isfinite(dev) || dev > dev_old * (1.0 + 1e-7) + 1e-9) && half < 30; ++half) {
      beta = 0.5 * (beta + beta_old);
      eta = design.x * beta;
      mu = eta.unaryExpr(&inv_logit);
      dev = binomial_deviance(successes, trials, mu);
    }
    if (!std::isfinite(dev)) fail(ErrorKind::Numerical, "deviance became non-finite during IRLS");

    const bool done = std::abs(dev - dev_old) / (std::abs(dev) + 0.1) < opts.tolerance;
    dev_old = dev;
    beta_old = beta;
    have_beta = true;
    if (done) {
      m.converged = true;
      break;
    }
  }

  m.coefficients = beta;
  m.fitted = mu;
  m.residual_deviance = dev_old;
  m.successes = successes;
  m.trials = trials;
  m.df_residual = static_cast<int>(n - p);
  m.df_null = static_cast<int>(n - 1);

  const double p0 = successes.sum() / trials.sum();
  m.null_deviance = binomial_deviance(successes, trials, Vector::Constant(n, p0));

  m.log_likelihood = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = successes(i);
    const double t = trials(i);
    m.log_likelihood += std::lgamma(t + 1) - std::lgamma(s + 1) - std::lgamma(t - s + 1);
    if (s > 0) m.log_likelihood += s * std::log(mu(i));
    if (t - s > 0) m.log_likelihood += (t - s) * std::log1p(-mu(i));
  }

  const double eps = 10 * DBL_EPSILON;
  m.boundary = (mu.array() < eps).any() || (mu.array() > 1.0 - eps).any();
  // A constant response has its MLE at infinity; IRLS stops on a flat deviance first.
  const bool constant = (successes.array() == 0.0).all() || (successes.array() == trials.array()).all();
  if (constant) m.boundary = true;

  const Vector w = trials.array() * mu.array() * (1.0 - mu.array());
  const Matrix a = design.x.array().colwise() * w.array().sqrt();
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() == p) {
    const Matrix xtwx_inv = (a.transpose() * a).ldlt().solve(Matrix::Identity(p, p));
    m.standard_errors = xtwx_inv.diagonal().cwiseMax(0.0).cwiseSqrt();
  } else {
    m.standard_errors = Vector::Constant(p, std::numeric_limits<double>::infinity());
  }

  if (!m.converged) {
    m.warnings.push_back("IRLS did not converge in " + std::to_string(opts.max_iterations) + " iterations");
  }
  if (constant) {
    m.warnings.push_back("response is constant; coefficients diverge");
  } else if (m.boundary) {
    m.warnings.push_back("fitted probabilities numerically 0 or 1 occurred");
  }
  return m;
}

GlmModel fit_logistic(const Design& design, const Vector& y, FitOptions opts) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) fail(ErrorKind::InvalidArgument, "logistic responses must be 0 or 1");
  }
  return fit_binomial(design, y, Vector::Ones(y.size()), opts);
}

GlmModel fit_logistic(const Design& design, std::span<const bool> y, FitOptions opts) {
  Vector v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v(static_cast<Eigen::Index>(i)) = y[i] ? 1.0 : 0.0;
  return fit_logistic(design, v, opts);
}

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) fail(ErrorKind::InvalidArgument, "chi-square degrees of freedom must be positive");
  if (std::isnan(x)) fail(ErrorKind::InvalidArgument, "chi-square statistic is NaN");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

LrtResult lrt_from_deviances(double nested_deviance, double full_deviance, int df) {
  if (df <= 0) fail(ErrorKind::InvalidArgument, "likelihood-ratio test needs a positive df");
  LrtResult r;
  r.deviance_diff = std::max(0.0, nested_deviance - full_deviance);
  r.df = df;
  r.p_value = chi_square_sf(r.deviance_diff, df);
  return r;
}

LrtResult lrt(const GlmModel& nested, const GlmModel& full) {
  const bool same_response = nested.successes.size() == full.successes.size() &&
                             nested.successes == full.successes && nested.trials == full.trials;
  if (!same_response) fail(ErrorKind::InvalidArgument, "models were fitted to different responses");
  for (const auto& t : nested.terms) {
    if (std::find(full.terms.begin(), full.terms.end(), t) == full.terms.end()) {
      fail(ErrorKind::InvalidArgument, "models are not nested: term '" + t + "' missing from the full model");
    }
  }
  const auto df = static_cast<int>(full.parameters() - nested.parameters());
  if (df == 0) return {0.0, 0, 1.0};
  if (df < 0) fail(ErrorKind::InvalidArgument, "models are not nested: full model has fewer parameters");
  return lrt_from_deviances(nested.residual_deviance, full.residual_deviance, df);
}

}  // namespace spdf::glm
