#include <charconv>
#include <istream>
#include <ostream>

#include "spdf/error.hpp"
#include "spdf/glmstats.hpp"
#include "spdf/simengine.hpp"

namespace spdf::glm {
using nlohmann::json;

namespace {

Vector response(std::span<const FeatureRow> rows) {
  Vector y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = rows[i].cheat_confirmed ? 1.0 : 0.0;
  return y;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json index_json(const std::vector<Eigen::Index>& v) {
  json out = json::array();
  for (auto i : v) out.push_back(i);
  return out;
}

json diagnostics_json(const std::optional<Diagnostics>& d) {
  if (!d) return nullptr;
  return {{"hat_values", vector_json(d->hat_values)},
          {"studentized_residuals", vector_json(d->studentized_residuals)},
          {"cooks_d", vector_json(d->cooks_d)},
          {"high_leverage", index_json(d->high_leverage)},
          {"influential", index_json(d->influential)},
          {"max_hat", d->hat_values.size() ? d->hat_values.maxCoeff() : 0.0},
          {"max_abs_studentized", d->studentized_residuals.size() ? d->studentized_residuals.cwiseAbs().maxCoeff() : 0.0},
          {"max_cooks_d", d->cooks_d.size() ? d->cooks_d.maxCoeff() : 0.0}};
}

json dispersion_json(const DispersionTest& t) {
  return {{"test", "pearson-chi-square"},
          {"pearson_chi2", t.pearson_chi2},
          {"df", t.df},
          {"dispersion", t.dispersion},
          {"p_value", t.p_value}};
}

bool parse_bool(std::string_view s, std::size_t line) {
  if (s == "true") return true;
  if (s == "false") return false;
  fail(ErrorKind::Parse, "line " + std::to_string(line) + ": expected true/false, got '" + std::string(s) + "'");
}

}  // namespace

std::vector<FeatureRow> build_features(std::span<const ranking::PairAssessment> rows,
                                       const social::ConnectionIndex& connections) {
  std::vector<FeatureRow> out;
  for (const auto& r : rows) {
    if (r.status == ranking::Status::NotChecked) continue;
    FeatureRow f;
    f.pair_id = r.id;
    f.match_cs = r.cs;
    if (const auto* c = connections.find(r.p_i, r.p_j)) {
      f.match_fb = c->follows_on("FB");
      f.match_tw = c->follows_on("TW");
    }
    f.se_hits = r.se_hits;
    f.cheat_confirmed = r.status == ranking::Status::Confirmed;
    out.push_back(std::move(f));
  }
  return out;
}

void write_features_csv(std::ostream& out, std::span<const FeatureRow> rows) {
  out << "pair_id,match_cs,match_fb,match_tw,se_hits,cheat_confirmed\n";
  for (const auto& r : rows) {
    out << r.pair_id << ',' << sim::format_real(r.match_cs) << ',' << (r.match_fb ? "true" : "false") << ','
        << (r.match_tw ? "true" : "false") << ',' << r.se_hits << ',' << (r.cheat_confirmed ? "true" : "false")
        << '\n';
  }
}

std::vector<FeatureRow> read_features_csv(std::istream& in) {
  std::vector<FeatureRow> out;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "pair_id,match_cs,match_fb,match_tw,se_hits,cheat_confirmed") {
        fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": unexpected feature table header");
      }
      header = true;
      continue;
    }
    std::vector<std::string_view> cells;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != 6) fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": expected 6 fields");
    FeatureRow r;
    r.pair_id = cells[0];
    auto [p1, e1] = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), r.match_cs);
    auto [p2, e2] = std::from_chars(cells[4].data(), cells[4].data() + cells[4].size(), r.se_hits);
    if (e1 != std::errc{} || p1 != cells[1].data() + cells[1].size() || e2 != std::errc{} ||
        p2 != cells[4].data() + cells[4].size()) {
      fail(ErrorKind::Parse, "line " + std::to_string(lineno) + ": malformed number");
    }
    r.match_fb = parse_bool(cells[2], lineno);
    r.match_tw = parse_bool(cells[3], lineno);
    r.cheat_confirmed = parse_bool(cells[5], lineno);
    out.push_back(std::move(r));
  }
  return out;
}

Design design_without_social(std::span<const FeatureRow> rows) {
  Vector cs(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) cs(static_cast<Eigen::Index>(i)) = rows[i].match_cs;
  return make_design({"match_cs"}, {cs});
}

Design design_with_social(std::span<const FeatureRow> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Vector cs(n), fb(n), tw(n), hits(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    cs(i) = r.match_cs;
    fb(i) = r.match_fb ? 1.0 : 0.0;
    tw(i) = r.match_tw ? 1.0 : 0.0;
    hits(i) = static_cast<double>(r.se_hits);
  }
  return make_design({"match_cs", "match_fb", "match_tw", "se_hits"}, {cs, fb, tw, hits});
}

ComparisonReport compare_models(std::span<const FeatureRow> rows, FitOptions opts) {
  ComparisonReport r;
  r.rows = rows.size();
  for (const auto& f : rows) r.confirmed += f.cheat_confirmed ? 1 : 0;
  if (r.rows < kMinDecidedPairs || r.confirmed == 0 || r.confirmed == r.rows) {
    fail(ErrorKind::InvalidArgument, "model comparison needs at least " + std::to_string(kMinDecidedPairs) +
                                         " decided pairs including both confirmed and rejected ones (have " +
                                         std::to_string(r.rows) + " decided, " + std::to_string(r.confirmed) +
                                         " confirmed)");
  }
  const Vector y = response(rows);
  const Vector ones = Vector::Ones(y.size());
  const Design wo = design_without_social(rows);
  const Design w = design_with_social(rows);

  r.without_social = fit_binomial(wo, y, ones, opts);
  r.without_social.formula = "cheat_confirmed ~ match_cs";
  r.with_social = fit_binomial(w, y, ones, opts);
  r.with_social.formula = "cheat_confirmed ~ match_cs + match_fb + match_tw + se_hits";
  r.lrt = lrt(r.without_social, r.with_social);
  r.dispersion_without = dispersion_test(r.without_social, wo, y, ones);
  r.dispersion_with = dispersion_test(r.with_social, w, y, ones);
  try {
    r.diagnostics_without = influence_diagnostics(r.without_social, wo, y, ones);
  } catch (const Error& e) {
    r.warnings.push_back(std::string("check_woSocio diagnostics unavailable: ") + e.what());
  }
  try {
    r.diagnostics_with = influence_diagnostics(r.with_social, w, y, ones);
  } catch (const Error& e) {
    r.warnings.push_back(std::string("check_wSocio diagnostics unavailable: ") + e.what());
  }
  for (const auto* m : {&r.without_social, &r.with_social}) {
    for (const auto& msg : m->warnings) r.warnings.push_back(m->formula + ": " + msg);
  }
  return r;
}

json model_to_json(const GlmModel& m) {
  json coefs = json::array();
  const Vector p = m.wald_p_values();
  for (Eigen::Index k = 0; k < m.parameters(); ++k) {
    coefs.push_back({{"term", m.terms[static_cast<std::size_t>(k)]},
                     {"estimate", m.coefficients(k)},
                     {"std_error", m.standard_errors(k)},
                     {"p_value", p(k)}});
  }
  return {{"formula", m.formula},
          {"coefficients", coefs},
          {"residual_deviance", m.residual_deviance},
          {"null_deviance", m.null_deviance},
          {"df_residual", m.df_residual},
          {"df_null", m.df_null},
          {"log_likelihood", m.log_likelihood},
          {"aic", -2.0 * m.log_likelihood + 2.0 * static_cast<double>(m.parameters())},
          {"converged", m.converged},
          {"boundary", m.boundary},
          {"iterations", m.iterations}};
}

json report_to_json(const ComparisonReport& r) {
  return {{"rows", r.rows},
          {"confirmed", r.confirmed},
          {"check_woSocio", model_to_json(r.without_social)},
          {"check_wSocio", model_to_json(r.with_social)},
          {"lrt", {{"deviance_diff", r.lrt.deviance_diff}, {"df", r.lrt.df}, {"p_value", r.lrt.p_value}}},
          {"dispersion", {{"check_woSocio", dispersion_json(r.dispersion_without)},
                          {"check_wSocio", dispersion_json(r.dispersion_with)}}},
          {"diagnostics", {{"check_woSocio", diagnostics_json(r.diagnostics_without)},
                           {"check_wSocio", diagnostics_json(r.diagnostics_with)}}},
          {"warnings", r.warnings}};
}

}  // namespace spdf::glm
