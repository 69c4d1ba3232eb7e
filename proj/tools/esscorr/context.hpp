#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "esscorr/esscorr.hpp"

namespace cli {

using nlohmann::json;
using esscorr::cplx;
using esscorr::Vec3;

/// Options shared by every subcommand.
struct GlobalOptions {
  std::string state;
  std::string out = ".";
  std::uint64_t seed = 1;
  std::optional<int> cutoff;
  bool no_timestamp = false;
  std::vector<std::string> tol_overrides;
};

/// Uniform sampling of [lo, hi] with n points (n = 1 gives lo).
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;

  double at(int i) const;
  json to_json() const;
};

Range parse_range(const std::vector<double>& v, const std::string& name);

class Context {
 public:
  explicit Context(GlobalOptions opts);

  const GlobalOptions& options() const { return opts_; }
  const esscorr::Tolerances& tolerances() const { return tol_; }

  /// Text of --state: inline JSON if it starts with '{', else a file path.
  std::string state_text() const;
  bool has_state() const { return !opts_.state.empty(); }

  /// Parsed --state, or `fallback` when none was given.
  esscorr::StateRequest state_request(
      const std::optional<esscorr::StateSpec>& fallback = std::nullopt) const;

  /// --cutoff, then the state's own cutoff, then suggest_cutoff with the
  /// given MGF weight.
  int resolve_cutoff(const esscorr::StateRequest& req, double z_max = 1.0,
                     esscorr::CutoffPolicy policy = esscorr::CutoffPolicy::kAnyDirection) const;

  /// Opens out/name and writes the optional timestamp comment line.
  std::ofstream open_csv(const std::string& name) const;
  std::ofstream open_binary(const std::string& name) const;
  /// Writes out/name with the resolved global options added under "run".
  void write_json(const std::string& name, json doc) const;

  json run_config() const;

 private:
  std::filesystem::path path(const std::string& name) const;

  GlobalOptions opts_;
  esscorr::Tolerances tol_;
};

Vec3 parse_vec3(const std::vector<double>& v, const std::string& name);
json vec3_json(const Vec3& v);
json complex_json(cplx z);
json warnings_json(const esscorr::Warnings& w);
json state_json(const esscorr::StateSpec& spec, int cutoff);

/// Closed-form MGF, or nothing outside the closed form's domain.
std::optional<cplx> closed_form(const esscorr::StateSpec& spec,
                                const esscorr::MeasurementDirection& dir, cplx t, double tau);

}  // namespace cli
