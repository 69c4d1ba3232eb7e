#include <algorithm>
#include <cmath>

#include "commands.hpp"

namespace cli {

namespace {

struct ReconstructOptions {
  std::optional<double> half_width;
  int n = 64;
  std::optional<double> tau;
  bool no_window = false;
  std::int64_t oracle_samples = 1'000'000;
  double tol_fraction = 0.02;
  double peak_fraction = 0.1;
  int max_peaks = 16;
};

double suggested_half_width(const esscorr::CoherentEnsemble& ensemble) {
  if (const auto* pts = std::get_if<std::vector<esscorr::CoherentPoint>>(&ensemble)) {
    double s0 = 0.0;
    for (const auto& p : *pts) {
      s0 = std::max(s0, std::norm(p.alpha) + std::norm(p.beta));
    }
    return std::ceil(s0 + 4.0);
  }
  const auto& g = std::get<esscorr::GaussianEnsemble>(ensemble);
  const double mean = std::norm(g.alpha0) + std::norm(g.beta0) + g.nbar_a + g.nbar_b;
  const double var = g.nbar_a * g.nbar_a + 2.0 * g.nbar_a * std::norm(g.alpha0) +
                     g.nbar_b * g.nbar_b + 2.0 * g.nbar_b * std::norm(g.beta0);
  return std::max(4.0, std::ceil(mean + 6.0 * std::sqrt(var)));
}

double suggested_half_width(const esscorr::TwoModeState& state) {
  return std::ceil(2.0 * esscorr::stokes_mean(state).S0 + 6.0);
}

/// Grid points not smaller than any of their 26 neighbours.
json local_maxima(const esscorr::PessGrid& p, double floor, int limit) {
  const auto& ax = p.grid.axes;
  struct Peak {
    double value;
    int ix, iy, iz;
  };
  std::vector<Peak> peaks;
  for (int ix = 0; ix < ax[0].n; ++ix) {
    for (int iy = 0; iy < ax[1].n; ++iy) {
      for (int iz = 0; iz < ax[2].n; ++iz) {
        const double v = p.at(ix, iy, iz);
        if (v < floor) {
          continue;
        }
        bool top = true;
        for (int dx = -1; dx <= 1 && top; ++dx) {
          for (int dy = -1; dy <= 1 && top; ++dy) {
            for (int dz = -1; dz <= 1 && top; ++dz) {
              const int jx = ix + dx, jy = iy + dy, jz = iz + dz;
              if ((dx || dy || dz) && jx >= 0 && jy >= 0 && jz >= 0 && jx < ax[0].n &&
                  jy < ax[1].n && jz < ax[2].n && p.at(jx, jy, jz) > v) {
                top = false;
              }
            }
          }
        }
        if (top) {
          peaks.push_back({v, ix, iy, iz});
        }
      }
    }
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });
  if (static_cast<int>(peaks.size()) > limit) {
    peaks.resize(limit);
  }
  json out = json::array();
  for (const auto& pk : peaks) {
    out.push_back({{"index", {pk.ix, pk.iy, pk.iz}},
                   {"S", vec3_json(p.grid.point(pk.ix, pk.iy, pk.iz))},
                   {"value", pk.value}});
  }
  return out;
}

json summary(const esscorr::PessGrid& p, double tol_fraction, double peak_fraction, int limit) {
  const double peak = p.peak();
  const auto cls = esscorr::classicality_check(p, tol_fraction * std::max(peak, 0.0));
  return {{"label", p.label},
          {"tau_used", p.tau_used},
          {"windowed", p.windowed},
          {"integral", p.integral()},
          {"min", p.min_value()},
          {"peak", peak},
          {"essentially_classical", cls.essentially_classical},
          {"peaks", local_maxima(p, peak_fraction * peak, limit)},
          {"warnings", warnings_json(p.warnings)}};
}

void run_reconstruct(const Context& ctx, const ReconstructOptions& o) {
  if (o.n < 2) {
    throw esscorr::ValidationError("--n must be at least 2");
  }
  if (o.oracle_samples < 0 || !(o.tol_fraction >= 0.0) || !(o.peak_fraction >= 0.0) ||
      o.max_peaks < 1) {
    throw esscorr::ValidationError("reconstruction options out of range");
  }
  const std::string text = ctx.has_state()
                               ? ctx.state_text()
                               : std::string(R"({"kind":"ensemble","components":[{"weight":1,"alpha":0,"beta":0}]})");
  const bool is_ensemble = esscorr::is_ensemble_json(text);

  esscorr::InversionOptions inv;
  inv.window = !o.no_window;
  inv.imaginary_residue = ctx.tolerances().imaginary_residue;
  inv.normalization = ctx.tolerances().pess_normalization;
  inv.boundary_mass = ctx.tolerances().boundary_mass;

  json doc{{"command", "reconstruct"}, {"n", o.n}, {"window", inv.window}};
  esscorr::PessGrid pess;
  std::optional<esscorr::PessGrid> oracle;
  esscorr::Warnings warnings;

  if (is_ensemble) {
    const auto ens = esscorr::parse_ensemble_json(text);
    esscorr::validate_ensemble(ens, ctx.tolerances());
    const auto grid = esscorr::Grid3::cube(o.half_width.value_or(suggested_half_width(ens)), o.n);
    grid.validate();
    const double tau = o.tau.value_or(esscorr::default_tau(grid, ens));
    const auto data = esscorr::mgf_imaginary_grid(ens, esscorr::DualGrid3::of(grid), tau);
    pess = esscorr::invert_to_pess(data, grid, inv);
    if (o.oracle_samples > 0) {
      oracle = esscorr::pess_mc_oracle(ens, grid, o.oracle_samples, ctx.options().seed);
    }
    doc["ensemble"] = json::parse(esscorr::ensemble_to_json(ens));
    doc["grid"] = json::parse(esscorr::grid_to_json(grid));
    doc["tau"] = tau;
  } else {
    const auto req = ctx.state_request();
    const auto probe = esscorr::make_state(req.spec, ctx.resolve_cutoff(req), ctx.tolerances());
    const auto grid = esscorr::Grid3::cube(o.half_width.value_or(suggested_half_width(probe)), o.n);
    grid.validate();
    const auto dual = esscorr::DualGrid3::of(grid);
    double k_max = 0.0;
    for (int i = 0; i < 3; ++i) {
      k_max = std::max(k_max, dual.n[i] / 2 * dual.dk[i]);
    }
    const double tau = o.tau.value_or(esscorr::default_tau(grid));
    const int cutoff = ctx.resolve_cutoff(req, std::hypot(1.0, std::sqrt(3.0) * k_max));
    const auto state = esscorr::make_state(req.spec, cutoff, ctx.tolerances());
    warnings = state.warnings();
    const auto data = esscorr::mgf_imaginary_grid(state, dual, tau, &warnings);
    pess = esscorr::invert_to_pess(data, grid, inv);
    doc["state"] = state_json(req.spec, cutoff);
    doc["cutoff"] = cutoff;
    doc["grid"] = json::parse(esscorr::grid_to_json(grid));
    doc["tau"] = tau;
  }

  {
    auto bin = ctx.open_binary("pess.bin");
    esscorr::write_pess_binary(bin, pess);
    auto csv = ctx.open_csv("pess.csv");
    esscorr::write_pess_csv(csv, pess);
  }
  json outputs{"pess.bin", "pess.csv"};
  doc["pess"] = summary(pess, o.tol_fraction, o.peak_fraction, o.max_peaks);
  if (oracle) {
    auto bin = ctx.open_binary("pess_oracle.bin");
    esscorr::write_pess_binary(bin, *oracle);
    outputs.push_back("pess_oracle.bin");
    doc["oracle"] = summary(*oracle, o.tol_fraction, o.peak_fraction, o.max_peaks);
    doc["oracle"]["samples"] = o.oracle_samples;
    doc["l1_distance"] = esscorr::l1_distance(pess, *oracle);
  }
  doc["tol_fraction"] = o.tol_fraction;
  doc["peak_fraction"] = o.peak_fraction;
  doc["warnings"] = warnings_json(warnings);
  doc["outputs"] = outputs;
  ctx.write_json("reconstruct.json", doc);
}

}  // namespace

void add_reconstruct_command(CLI::App& app, Action& action) {
  auto o = std::make_shared<ReconstructOptions>();
  auto* cmd = app.add_subcommand("reconstruct", "Invert the MGF on a Stokes-space grid");
  cmd->add_option("--half-width", o->half_width, "Half-width of the cubic S grid");
  cmd->add_option("--n", o->n, "Points per axis");
  cmd->add_option("--tau", o->tau, "Converging factor");
  cmd->add_flag("--no-window", o->no_window, "Skip the Hann window");
  cmd->add_option("--oracle-samples", o->oracle_samples, "Monte-Carlo oracle samples (0 skips)");
  cmd->add_option("--tol-fraction", o->tol_fraction, "Allowed negativity as a fraction of the peak");
  cmd->add_option("--peak-fraction", o->peak_fraction, "Report local maxima above this fraction of the peak");
  cmd->add_option("--max-peaks", o->max_peaks, "Maximum number of reported peaks");
  cmd->callback([&action, o] { action = [o](const Context& c) { run_reconstruct(c, *o); }; });
}

}  // namespace cli
