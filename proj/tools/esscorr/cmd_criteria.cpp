#include <cmath>
#include <numbers>
#include <sstream>

#include "commands.hpp"

namespace cli {

namespace {

struct HomScanOptions {
  std::vector<double> t_list{std::numbers::sqrt2, std::sqrt(3.0), 2.0};
  std::vector<double> t2_range{0.0, 1.0, 101};
};

struct TmsvScanOptions {
  std::vector<double> tanh_range{0.05, 0.95, 19};
  std::vector<double> tau_range{0.05, 0.5, 10};
};

struct NcTestOptions {
  std::vector<double> direction{0.0, 0.0, 1.0};
  std::vector<std::string> points;
  std::vector<double> k;
  std::optional<double> tolerance;
};

double weight_bound(cplx t, double tau) {
  return std::max(std::abs(1.0 + t - tau), std::abs(1.0 - t - tau));
}

std::string_view verdict_of(double value, double tol) {
  return esscorr::verdict_name(esscorr::make_report(value, tol).verdict);
}

void run_hom_scan(const Context& ctx, const HomScanOptions& o) {
  const Range r = parse_range(o.t2_range, "--t2-range");
  if (r.lo < 0.0 || r.hi > 1.0) {
    throw esscorr::ValidationError("--t2-range must lie in [0, 1]");
  }
  if (o.t_list.empty()) {
    throw esscorr::ValidationError("--t needs at least one amplitude");
  }
  double z_max = 1.0;
  for (double t : o.t_list) {
    if (!std::isfinite(t)) {
      throw esscorr::ValidationError("--t values must be finite");
    }
    z_max = std::max(z_max, weight_bound(2.0 * t, 0.0));
  }
  const auto req = ctx.state_request(esscorr::StateSpec{esscorr::HomInput{}});
  const int cutoff = ctx.resolve_cutoff(req, z_max);
  const auto state = esscorr::make_state(req.spec, cutoff, ctx.tolerances());
  const double tol = ctx.tolerances().verdict;

  auto out = ctx.open_csv("hom_scan.csv");
  esscorr::CsvWriter csv(out, {"T2", "t", "det", "verdict"});
  for (double t : o.t_list) {
    for (int i = 0; i < r.n; ++i) {
      const double T2 = r.at(i);
      const auto dir = esscorr::MeasurementDirection::from_beam_splitter(std::sqrt(T2),
                                                                         std::sqrt(1.0 - T2));
      const double det = esscorr::second_order_det(state, dir, t, 0.0, 0.0, 0.0);
      csv << T2 << t << det << verdict_of(det, tol);
      csv.end_row();
    }
  }
  json doc{{"command", "hom-scan"},
           {"state", state_json(req.spec, cutoff)},
           {"cutoff", cutoff},
           {"t", o.t_list},
           {"t2_range", r.to_json()},
           {"rows", r.n * o.t_list.size()},
           {"warnings", warnings_json(state.warnings())},
           {"outputs", {"hom_scan.csv"}}};
  ctx.write_json("hom-scan.json", doc);
}

void run_tmsv_scan(const Context& ctx, const TmsvScanOptions& o) {
  const Range xr = parse_range(o.tanh_range, "--tanh-range");
  const Range sr = parse_range(o.tau_range, "--tau-range");
  if (xr.lo <= 0.0 || xr.hi >= 1.0) {
    throw esscorr::ValidationError("--tanh-range must lie inside (0, 1)");
  }
  if (sr.lo <= 0.0 || sr.hi > 0.5) {
    throw esscorr::ValidationError("--tau-range must lie inside (0, 1/2]");
  }
  const auto dir = esscorr::MeasurementDirection::from_vector(Vec3(0.0, 0.0, 1.0));
  const double tol = ctx.tolerances().verdict;

  auto out = ctx.open_csv("tmsv_scan.csv");
  esscorr::CsvWriter csv(out, {"tanh_xi", "xi", "tau", "cutoff", "det", "verdict"});
  esscorr::Warnings warnings;
  int negative = 0;
  json cutoffs = json::array();
  for (int i = 0; i < xr.n; ++i) {
    const double x = xr.at(i);
    const esscorr::StateRequest req{esscorr::Tmsv{std::atanh(x)}, std::nullopt};
    const int cutoff = ctx.resolve_cutoff(req, 1.0, esscorr::CutoffPolicy::kInput);
    const auto state = esscorr::make_state(req.spec, cutoff, ctx.tolerances());
    warnings.insert(warnings.end(), state.warnings().begin(), state.warnings().end());
    cutoffs.push_back(cutoff);
    for (int j = 0; j < sr.n; ++j) {
      const double tau = sr.at(j);
      const double det = esscorr::second_order_det(state, dir, -tau, tau, tau, tau);
      negative += det < -tol ? 1 : 0;
      csv << x << std::atanh(x) << tau << cutoff << det << verdict_of(det, tol);
      csv.end_row();
    }
  }
  json doc{{"command", "tmsv-scan"},
           {"direction", vec3_json(dir.e())},
           {"tanh_range", xr.to_json()},
           {"tau_range", sr.to_json()},
           {"cutoffs", cutoffs},
           {"rows", xr.n * sr.n},
           {"nonclassical_rows", negative},
           {"warnings", warnings_json(warnings)},
           {"outputs", {"tmsv_scan.csv"}}};
  ctx.write_json("tmsv-scan.json", doc);
}

esscorr::MatrixPoint parse_point(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> v;
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw esscorr::ValidationError("--point expects t_re,t_im,tau: " + text);
    }
  }
  if (v.size() != 3 || !std::isfinite(v[0]) || !std::isfinite(v[1]) || !(v[2] >= 0.0)) {
    throw esscorr::ValidationError("--point expects t_re,t_im,tau with tau >= 0: " + text);
  }
  return {cplx(v[0], v[1]), v[2]};
}

json report_json(std::string name, const esscorr::CriterionReport& r) {
  return {{"criterion", std::move(name)},
          {"value", r.value},
          {"tolerance", r.tolerance},
          {"verdict", esscorr::verdict_name(r.verdict)}};
}

void run_nctest(const Context& ctx, const NcTestOptions& o) {
  const auto dir = esscorr::MeasurementDirection::from_vector(parse_vec3(o.direction, "--direction"));
  std::vector<esscorr::MatrixPoint> points;
  for (const auto& p : o.points) {
    points.push_back(parse_point(p));
  }
  if (points.empty()) {
    points = {{cplx(1.0, 0.0), 0.0}, {cplx(0.0, 0.0), 0.0}};
  }
  std::optional<Vec3> k;
  if (!o.k.empty()) {
    k = parse_vec3(o.k, "--k");
  }
  const double tol = o.tolerance.value_or(ctx.tolerances().verdict);
  if (!(tol >= 0.0)) {
    throw esscorr::ValidationError("--tolerance must be non-negative");
  }

  double z_max = 1.0;
  for (const auto& a : points) {
    for (const auto& b : points) {
      z_max = std::max(z_max, weight_bound(a.t + std::conj(b.t), a.tau + b.tau));
    }
  }
  if (k) {
    z_max = std::max(z_max, std::hypot(1.0, k->norm()));
  }
  const auto req = ctx.state_request(esscorr::StateSpec{esscorr::HomInput{}});
  const int cutoff = ctx.resolve_cutoff(req, z_max);
  const auto state = esscorr::make_state(req.spec, cutoff, ctx.tolerances());
  esscorr::Warnings warnings = state.warnings();

  json reports = json::array();
  const auto m = esscorr::mgf_matrix(state, {dir, points}, &warnings);
  const auto mv = esscorr::matrix_verdict(m, tol, ctx.tolerances());
  json matrix_report = report_json("mgf_matrix_min_eigenvalue", mv);
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(complex_json(m(i, j)));
    }
    rows.push_back(row);
  }
  matrix_report["matrix"] = rows;
  matrix_report["sylvester_minors"] = esscorr::sylvester_minors(m);
  if (mv.witness) {
    json w = json::array();
    for (Eigen::Index i = 0; i < mv.witness->size(); ++i) {
      w.push_back(complex_json((*mv.witness)(i)));
    }
    matrix_report["witness"] = w;
  }
  reports.push_back(matrix_report);

  if (points.size() >= 2) {
    const auto& p = points[0];
    const auto& q = points[1];
    reports.push_back(report_json(
        "second_order_det",
        esscorr::make_report(esscorr::second_order_det(state, dir, p.t, p.tau, q.t, q.tau), tol)));
    if (q.t == cplx(0.0, 0.0) && q.tau == 0.0) {
      esscorr::emit(&warnings, "cauchy_schwarz_skipped",
                    "the Cauchy-Schwarz form needs a second point other than (0, 0)");
    } else {
      const double cs = esscorr::cauchy_schwarz_violation(state, dir, p.t, p.tau, q.t, q.tau);
      auto r = esscorr::make_report(-cs, tol);
      r.value = cs;
      reports.push_back(report_json("cauchy_schwarz_violation", r));
    }
  }
  const auto var = esscorr::variance_criteria(state, dir);
  reports.push_back(report_json("var_N", esscorr::make_report(var.var_N, tol)));
  reports.push_back(report_json("var_S", esscorr::make_report(var.var_S, tol)));
  const auto cc = esscorr::cross_correlation_det(state, dir);
  reports.push_back(report_json("cross_correlation_stokes", esscorr::make_report(cc.stokes, tol)));
  reports.push_back(
      report_json("cross_correlation_photon_number", esscorr::make_report(cc.photon_number, tol)));
  if (k) {
    reports.push_back(report_json("char_fn", esscorr::char_fn_criterion(state, *k, tol)));
  }

  auto out = ctx.open_csv("nctest.csv");
  esscorr::CsvWriter csv(out, {"criterion", "value", "verdict"});
  for (const auto& r : reports) {
    csv << r["criterion"].get<std::string>() << r["value"].get<double>()
        << r["verdict"].get<std::string>();
    csv.end_row();
  }

  json pts = json::array();
  for (const auto& p : points) {
    pts.push_back({{"t", complex_json(p.t)}, {"tau", p.tau}});
  }
  json doc{{"command", "nctest"},
           {"state", state_json(req.spec, cutoff)},
           {"cutoff", cutoff},
           {"direction", vec3_json(dir.e())},
           {"points", pts},
           {"k", k ? vec3_json(*k) : json(nullptr)},
           {"tolerance", tol},
           {"reports", reports},
           {"warnings", warnings_json(warnings)},
           {"outputs", {"nctest.csv"}}};
  ctx.write_json("nctest.json", doc);
}

}  // namespace

void add_criteria_commands(CLI::App& app, Action& action) {
  auto ho = std::make_shared<HomScanOptions>();
  auto* hom = app.add_subcommand("hom-scan", "Second-order determinant against beam-splitter transmission");
  hom->add_option("--t", ho->t_list, "Amplitudes t (repeatable)");
  hom->add_option("--t2-range", ho->t2_range, "|T|^2 grid: min max n")->expected(3);
  hom->callback([&action, ho] { action = [ho](const Context& c) { run_hom_scan(c, *ho); }; });

  auto to = std::make_shared<TmsvScanOptions>();
  auto* tmsv = app.add_subcommand("tmsv-scan", "Second-order determinant for squeezed vacuum");
  tmsv->add_option("--tanh-range", to->tanh_range, "tanh(xi) grid: min max n")->expected(3);
  tmsv->add_option("--tau-range", to->tau_range, "Converging factor grid: min max n")->expected(3);
  tmsv->callback([&action, to] { action = [to](const Context& c) { run_tmsv_scan(c, *to); }; });

  auto no = std::make_shared<NcTestOptions>();
  auto* nc = app.add_subcommand("nctest", "Evaluate every nonclassicality criterion for one state");
  nc->add_option("--direction", no->direction, "Measurement direction e (x y z)")->expected(3);
  nc->add_option("--point", no->points, "Matrix point t_re,t_im,tau (repeatable)");
  nc->add_option("--k", no->k, "Characteristic-function argument (x y z)")->expected(3);
  nc->add_option("--tolerance", no->tolerance, "Verdict tolerance");
  nc->callback([&action, no] { action = [no](const Context& c) { run_nctest(c, *no); }; });
}

}  // namespace cli
