#include <cmath>

#include "commands.hpp"

namespace cli {

namespace {

struct MgfOptions {
  std::vector<double> direction{0.0, 0.0, 1.0};
  std::vector<double> t_range{-1.0, 1.0, 11};
  std::vector<double> tau_range{0.0, 1.0, 11};
  double t_imag = 0.0;
  bool existence_only = false;
  std::vector<double> node;
};

struct SurfaceOptions {
  int n_theta = 32;
  int n_phi = 64;
  double t_re = 1.0;
  double t_im = 0.0;
  double tau = 0.0;
};

double weight_bound(cplx t, double tau) {
  return std::max(std::abs(1.0 + t - tau), std::abs(1.0 - t - tau));
}

void run_mgf(const Context& ctx, const MgfOptions& o) {
  const Range tr = parse_range(o.t_range, "--t-range");
  const Range sr = parse_range(o.tau_range, "--tau-range");
  if (!std::isfinite(o.t_imag)) {
    throw esscorr::ValidationError("--t-imag must be finite");
  }
  const auto dir = esscorr::MeasurementDirection::from_vector(parse_vec3(o.direction, "--direction"));

  std::vector<std::pair<cplx, double>> points;
  double z_max = 1.0;
  for (int j = 0; j < sr.n; ++j) {
    const double tau = sr.at(j);
    if (tau < 0.0) {
      throw esscorr::ValidationError("--tau-range must be non-negative");
    }
    for (int i = 0; i < tr.n; ++i) {
      const cplx t(tr.at(i), o.t_imag);
      if (o.existence_only && std::abs(t.real()) > tau) {
        continue;
      }
      points.emplace_back(t, tau);
      z_max = std::max(z_max, weight_bound(t, tau));
    }
  }
  if (points.empty()) {
    throw esscorr::ValidationError("the (t, tau) grid has no points");
  }

  const auto req = ctx.state_request();
  const int cutoff = ctx.resolve_cutoff(req, z_max);
  const auto state = esscorr::make_state(req.spec, cutoff, ctx.tolerances());
  const auto dist = esscorr::joint_photon_distribution(state, dir);
  esscorr::Warnings warnings = state.warnings();

  std::vector<esscorr::MgfRecord> rows;
  rows.reserve(points.size());
  double max_dev = 0.0;
  int compared = 0;
  for (const auto& [t, tau] : points) {
    const cplx value = esscorr::mgf(dist, t, tau, &warnings);
    if (const auto closed = closed_form(req.spec, dir, t, tau)) {
      max_dev = std::max(max_dev, std::abs(value - *closed));
      ++compared;
    }
    rows.push_back({dir.e(), t, tau, value});
  }
  auto csv = ctx.open_csv("mgf.csv");
  esscorr::write_mgf_csv(csv, rows);

  json doc{{"command", "mgf"},
           {"state", state_json(req.spec, cutoff)},
           {"cutoff", cutoff},
           {"direction", vec3_json(dir.e())},
           {"t_range", tr.to_json()},
           {"t_imag", o.t_imag},
           {"tau_range", sr.to_json()},
           {"existence_only", o.existence_only},
           {"rows", rows.size()},
           {"closed_form_points", compared},
           {"max_deviation_from_closed_form", max_dev},
           {"outputs", {"mgf.csv"}}};
  if (!o.node.empty()) {
    if (o.node.size() != 3) {
      throw esscorr::ValidationError("--node needs tau t_lo t_hi");
    }
    const auto root = esscorr::find_node(state, dir, o.node[0], o.node[1], o.node[2], &warnings,
                                         ctx.tolerances());
    doc["node"] = {{"tau", o.node[0]},
                   {"t_lo", o.node[1]},
                   {"t_hi", o.node[2]},
                   {"t", root ? json(*root) : json(nullptr)}};
  }
  doc["warnings"] = warnings_json(warnings);
  ctx.write_json("mgf.json", doc);
}

void run_surface(const Context& ctx, const SurfaceOptions& o) {
  const cplx t(o.t_re, o.t_im);
  if (!(o.tau >= 0.0)) {
    throw esscorr::ValidationError("--tau must be non-negative");
  }
  const auto grid = esscorr::sphere_grid(o.n_theta, o.n_phi);
  const auto req = ctx.state_request(esscorr::StateSpec{esscorr::HomInput{}});
  const int cutoff = ctx.resolve_cutoff(req, weight_bound(t, o.tau));
  const auto state = esscorr::make_state(req.spec, cutoff, ctx.tolerances());
  const auto samples = esscorr::surface_map(state, t, o.tau, grid);

  std::vector<esscorr::MgfRecord> rows;
  rows.reserve(samples.size());
  double pole_max = 0.0;
  double max_dev = 0.0;
  int compared = 0;
  for (const auto& s : samples) {
    rows.push_back({s.e, t, o.tau, s.value});
    if (const auto closed = closed_form(req.spec, esscorr::MeasurementDirection::from_vector(s.e),
                                        t, o.tau)) {
      max_dev = std::max(max_dev, std::abs(s.value - *closed));
      ++compared;
    }
    if (std::abs(std::abs(s.e.z()) - 1.0) < 1e-12) {
      pole_max = std::max(pole_max, std::abs(s.value));
    }
  }
  auto csv = ctx.open_csv("surface.csv");
  esscorr::write_mgf_csv(csv, rows);

  json doc{{"command", "surface"},
           {"state", state_json(req.spec, cutoff)},
           {"cutoff", cutoff},
           {"n_theta", o.n_theta},
           {"n_phi", o.n_phi},
           {"t", complex_json(t)},
           {"tau", o.tau},
           {"rows", rows.size()},
           {"max_abs_at_poles", pole_max},
           {"closed_form_points", compared},
           {"max_deviation_from_closed_form", max_dev},
           {"warnings", warnings_json(state.warnings())},
           {"outputs", {"surface.csv"}}};
  ctx.write_json("surface.json", doc);
}

}  // namespace

void add_mgf_commands(CLI::App& app, Action& action) {
  auto mo = std::make_shared<MgfOptions>();
  auto* mgf = app.add_subcommand("mgf", "Sample the MGF over a (t, tau) grid along one direction");
  mgf->add_option("--direction", mo->direction, "Measurement direction e (x y z)")
      ->expected(3);
  mgf->add_option("--t-range", mo->t_range, "Real part of t: min max n")->expected(3);
  mgf->add_option("--t-imag", mo->t_imag, "Imaginary part of t");
  mgf->add_option("--tau-range", mo->tau_range, "Converging factor: min max n")->expected(3);
  mgf->add_flag("--existence-only", mo->existence_only, "Keep only points with |Re t| <= tau");
  mgf->add_option("--node", mo->node, "Search for a sign change: tau t_lo t_hi")->expected(3);
  mgf->callback([&action, mo] { action = [mo](const Context& c) { run_mgf(c, *mo); }; });

  auto so = std::make_shared<SurfaceOptions>();
  auto* surf = app.add_subcommand("surface", "Evaluate the MGF on a sphere of directions");
  surf->add_option("--n-theta", so->n_theta, "Polar samples (poles included)");
  surf->add_option("--n-phi", so->n_phi, "Azimuthal samples");
  surf->add_option("--t", so->t_re, "Real part of t");
  surf->add_option("--t-imag", so->t_im, "Imaginary part of t");
  surf->add_option("--tau", so->tau, "Converging factor");
  surf->callback([&action, so] { action = [so](const Context& c) { run_surface(c, *so); }; });
}

}  // namespace cli
