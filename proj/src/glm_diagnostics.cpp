#include <algorithm>
#include <cfloat>
#include <cmath>

#include "spdf/error.hpp"
#include "spdf/glmstats.hpp"

namespace spdf::glm {
namespace {

Vector as_vector(std::span<const bool> y) {
  Vector v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v(static_cast<Eigen::Index>(i)) = y[i] ? 1.0 : 0.0;
  return v;
}

Vector probabilities(const GlmModel& model, const Design& design, const Vector& successes, const Vector& trials) {
  if (design.cols() != model.parameters()) fail(ErrorKind::InvalidArgument, "design does not match the model");
  if (successes.size() != design.rows() || trials.size() != design.rows()) {
    fail(ErrorKind::InvalidArgument, "response length does not match the design");
  }
  const Vector eta = design.x * model.coefficients;
  return eta.unaryExpr([](double e) { return std::clamp(1.0 / (1.0 + std::exp(-e)), DBL_EPSILON, 1.0 - DBL_EPSILON); });
}

Vector pearson_residuals(const Vector& s, const Vector& m, const Vector& mu) {
  return (s.array() - m.array() * mu.array()) / (m.array() * mu.array() * (1.0 - mu.array())).sqrt();
}

}  // namespace

DispersionTest dispersion_test(const GlmModel& model, const Design& design, const Vector& successes,
                               const Vector& trials) {
  const Vector mu = probabilities(model, design, successes, trials);
  DispersionTest t;
  t.df = static_cast<int>(design.rows() - design.cols());
  if (t.df <= 0) fail(ErrorKind::InvalidArgument, "dispersion test needs positive residual degrees of freedom");
  t.pearson_chi2 = pearson_residuals(successes, trials, mu).squaredNorm();
  t.dispersion = t.pearson_chi2 / t.df;
  t.p_value = chi_square_sf(t.pearson_chi2, t.df);
  return t;
}

DispersionTest dispersion_test(const GlmModel& model, const Design& design, std::span<const bool> y) {
  return dispersion_test(model, design, as_vector(y), Vector::Ones(static_cast<Eigen::Index>(y.size())));
}

Diagnostics influence_diagnostics(const GlmModel& model, const Design& design, const Vector& successes,
                                  const Vector& trials) {
  const Vector mu = probabilities(model, design, successes, trials);
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();

  const Vector w = trials.array() * mu.array() * (1.0 - mu.array());
  const Matrix a = design.x.array().colwise() * w.array().sqrt();
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < p) fail(ErrorKind::Numerical, "singular weighted cross-product matrix");
  // Leverages are the squared row norms of the thin Q factor.
  const Matrix q = qr.householderQ() * Matrix::Identity(n, p);

  Diagnostics d;
  d.hat_values = q.rowwise().squaredNorm();
  const Vector pear = pearson_residuals(successes, trials, mu);
  d.studentized_residuals.resize(n);
  d.cooks_d.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = successes(i);
    const double m = trials(i);
    const double h = d.hat_values(i);
    const double unit_dev = 2.0 * ((s > 0 ? s * std::log(s / (m * mu(i))) : 0.0) +
                                   (m - s > 0 ? (m - s) * std::log((m - s) / (m * (1.0 - mu(i)))) : 0.0));
    const double sign = s - m * mu(i) >= 0.0 ? 1.0 : -1.0;
    const double dev_res2 = std::max(0.0, unit_dev);
    d.studentized_residuals(i) = sign * std::sqrt(dev_res2 + h * pear(i) * pear(i) / (1.0 - h));
    const double r = pear(i) / (1.0 - h);
    d.cooks_d(i) = r * r * h / static_cast<double>(p);  // binomial dispersion is fixed at 1
  }

  const auto disp = dispersion_test(model, design, successes, trials);
  d.dispersion = disp.dispersion;
  d.overdispersion_p = disp.p_value;

  const double leverage_cut = 2.0 * static_cast<double>(p) / static_cast<double>(n);
  const double cooks_cut = 4.0 / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d.hat_values(i) > leverage_cut) d.high_leverage.push_back(i);
    if (d.cooks_d(i) > cooks_cut) d.influential.push_back(i);
  }
  return d;
}

Diagnostics influence_diagnostics(const GlmModel& model, const Design& design, std::span<const bool> y) {
  return influence_diagnostics(model, design, as_vector(y), Vector::Ones(static_cast<Eigen::Index>(y.size())));
}

}  // namespace spdf::glm
