#include <cmath>

#include "commands.hpp"

namespace cli {

namespace {

struct ClicksOptions {
  std::vector<double> direction{0.0, 0.0, 1.0};
  esscorr::ClickDetectorConfig a;
  esscorr::ClickDetectorConfig b;
  std::int64_t samples = 0;
};

json laplace_json(const std::vector<esscorr::LaplacePoint>& pts) {
  json arr = json::array();
  for (const auto& p : pts) {
    arr.push_back({{"t", p.t}, {"tau", p.tau}});
  }
  return arr;
}

void run_clicks(const Context& ctx, const ClicksOptions& o) {
  const auto dir = esscorr::MeasurementDirection::from_vector(parse_vec3(o.direction, "--direction"));
  o.a.validate(ctx.tolerances());
  o.b.validate(ctx.tolerances());
  if (o.samples < 0) {
    throw esscorr::ValidationError("--samples must be non-negative");
  }
  const auto req = ctx.state_request();
  const int cutoff = ctx.resolve_cutoff(req);
  const auto state = esscorr::make_state(req.spec, cutoff, ctx.tolerances());
  const auto dist = esscorr::joint_photon_distribution(state, dir);
  const auto clicks = esscorr::click_distribution(dist, o.a, o.b, ctx.tolerances());
  esscorr::Warnings warnings = state.warnings();

  std::optional<esscorr::ClickSampleSet> samples;
  if (o.samples > 0) {
    samples = esscorr::sample_clicks(clicks, o.samples, ctx.options().seed, ctx.tolerances());
  }

  {
    auto out = ctx.open_csv("clicks.csv");
    esscorr::write_click_csv(out, clicks);
  }
  if (samples) {
    auto out = ctx.open_csv("samples.csv");
    esscorr::write_click_csv(out, *samples);
  }

  std::vector<std::string> cols{"k", "l", "t", "tau", "mu", "mu_raw", "mgf_pipeline",
                                "mgf_closed_form"};
  if (samples) {
    cols.insert(cols.end(), {"estimate", "std_error"});
  }
  auto out = ctx.open_csv("moments.csv");
  esscorr::CsvWriter csv(out, cols);
  double max_dev = 0.0;
  for (int k = 0; k <= o.a.D; ++k) {
    for (int l = 0; l <= o.b.D; ++l) {
      const auto p = esscorr::click_moment_to_mgf_point(k, l, o.a, o.b);
      const double mu = esscorr::moments_from_clicks(clicks, k, l, true);
      const double raw = esscorr::moments_from_clicks(clicks, k, l, false);
      const double pipeline = esscorr::mgf(dist, p.t, p.tau, &warnings).real();
      const auto exact = closed_form(req.spec, dir, p.t, p.tau);
      const double closed = exact ? exact->real() : std::nan("");
      if (exact) {
        max_dev = std::max(max_dev, std::abs(mu - closed));
      }
      csv << k << l << p.t << p.tau << mu << raw << pipeline << closed;
      if (samples) {
        const auto est = esscorr::estimate_mgf_from_samples(*samples, k, l, o.a, o.b, true);
        csv << est.value << est.std_error;
      }
      csv.end_row();
    }
  }

  const auto region = esscorr::accessible_region(o.a, o.b, false);
  const auto sweep = esscorr::accessible_region(o.a, o.b, true);
  json outputs{"clicks.csv", "moments.csv"};
  if (samples) {
    outputs.push_back("samples.csv");
  }
  json doc{{"command", "clicks"},
           {"state", state_json(req.spec, cutoff)},
           {"cutoff", cutoff},
           {"direction", vec3_json(dir.e())},
           {"arm_a", json::parse(esscorr::to_json(o.a))},
           {"arm_b", json::parse(esscorr::to_json(o.b))},
           {"samples", o.samples},
           {"distribution", json::parse(esscorr::to_json(clicks))},
           {"lattice", laplace_json(region.lattice)},
           {"sweep_vertices", laplace_json(sweep.vertices)},
           {"max_deviation_from_closed_form", max_dev}};
  if (samples) {
    doc["sample_set"] = json::parse(esscorr::to_json(*samples));
  }
  doc["warnings"] = warnings_json(warnings);
  doc["outputs"] = outputs;
  ctx.write_json("clicks.json", doc);
}

void add_arm(CLI::App* cmd, esscorr::ClickDetectorConfig& cfg, const std::string& arm) {
  cmd->add_option("--d" + arm, cfg.D, "Detectors in arm " + arm);
  cmd->add_option("--eta-" + arm, cfg.eta, "Quantum efficiency of arm " + arm);
  cmd->add_option("--nu-" + arm, cfg.nu, "Dark-count rate of arm " + arm);
  cmd->add_option("--eps-" + arm, cfg.eps, "Filter transmission of arm " + arm);
}

}  // namespace

void add_clicks_command(CLI::App& app, Action& action) {
  auto o = std::make_shared<ClicksOptions>();
  auto* cmd = app.add_subcommand("clicks", "Click-counting statistics and the moments they sample");
  cmd->add_option("--direction", o->direction, "Measurement direction e (x y z)")->expected(3);
  add_arm(cmd, o->a, "a");
  add_arm(cmd, o->b, "b");
  cmd->add_option("--samples", o->samples, "Number of simulated detection events (0 skips sampling)");
  cmd->callback([&action, o] { action = [o](const Context& c) { run_clicks(c, *o); }; });
}

}  // namespace cli
