#include "context.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <map>
#include <sstream>

namespace cli {

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void apply_override(esscorr::Tolerances& tol, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) {
    throw esscorr::ValidationError("tolerance override must read name=value: " + item);
  }
  const std::string name = item.substr(0, eq);
  double value = 0.0;
  try {
    value = std::stod(item.substr(eq + 1));
  } catch (const std::exception&) {
    throw esscorr::ValidationError("tolerance override needs a number: " + item);
  }
  const std::map<std::string, double esscorr::Tolerances::*> fields = {
      {"verdict", &esscorr::Tolerances::verdict},
      {"leakage_bound", &esscorr::Tolerances::leakage_bound},
      {"matrix_hermiticity", &esscorr::Tolerances::matrix_hermiticity},
      {"click_normalization", &esscorr::Tolerances::click_normalization},
      {"quadrature_rtol", &esscorr::Tolerances::quadrature_rtol},
      {"imaginary_residue", &esscorr::Tolerances::imaginary_residue},
      {"pess_normalization", &esscorr::Tolerances::pess_normalization},
      {"boundary_mass", &esscorr::Tolerances::boundary_mass},
  };
  const auto it = fields.find(name);
  if (it == fields.end()) {
    throw esscorr::ValidationError("unknown tolerance '" + name + "'");
  }
  if (!(value >= 0.0)) {
    throw esscorr::ValidationError("tolerance '" + name + "' must be non-negative");
  }
  tol.*(it->second) = value;
}

}  // namespace

double Range::at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }

json Range::to_json() const { return json{{"min", lo}, {"max", hi}, {"n", n}}; }

Range parse_range(const std::vector<double>& v, const std::string& name) {
  if (v.size() != 3) {
    throw esscorr::ValidationError(name + " needs three values: min max n");
  }
  Range r{v[0], v[1], static_cast<int>(v[2])};
  if (r.n < 1 || static_cast<double>(r.n) != v[2] || r.hi < r.lo) {
    throw esscorr::ValidationError(name + " needs min <= max and a positive integer count");
  }
  return r;
}

Context::Context(GlobalOptions opts) : opts_(std::move(opts)) {
  for (const auto& item : opts_.tol_overrides) {
    apply_override(tol_, item);
  }
  std::error_code ec;
  std::filesystem::create_directories(opts_.out, ec);
  if (ec || !std::filesystem::is_directory(opts_.out)) {
    throw esscorr::ValidationError("cannot create output directory '" + opts_.out + "'");
  }
}

std::string Context::state_text() const {
  const auto first = opts_.state.find_first_not_of(" \t\n");
  if (first != std::string::npos && opts_.state[first] == '{') {
    return opts_.state;
  }
  std::ifstream in(opts_.state);
  if (!in) {
    throw esscorr::ValidationError("cannot read state file '" + opts_.state + "'");
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

esscorr::StateRequest Context::state_request(
    const std::optional<esscorr::StateSpec>& fallback) const {
  if (!has_state()) {
    if (!fallback) {
      throw esscorr::ValidationError("this command needs --state");
    }
    return {*fallback, std::nullopt};
  }
  return esscorr::parse_state_json(state_text());
}

int Context::resolve_cutoff(const esscorr::StateRequest& req, double z_max,
                            esscorr::CutoffPolicy policy) const {
  if (opts_.cutoff) {
    if (*opts_.cutoff < 0) {
      throw esscorr::ValidationError("--cutoff must be non-negative");
    }
    return *opts_.cutoff;
  }
  if (req.cutoff) {
    return *req.cutoff;
  }
  return esscorr::suggest_cutoff(req.spec, tol_.leakage_bound, policy, std::max(z_max, 1.0));
}

std::filesystem::path Context::path(const std::string& name) const {
  return std::filesystem::path(opts_.out) / name;
}

std::ofstream Context::open_csv(const std::string& name) const {
  std::ofstream out(path(name));
  if (!out) {
    throw esscorr::ValidationError("cannot write " + path(name).string());
  }
  if (!opts_.no_timestamp) {
    out << "# generated " << utc_now() << "\n";
  }
  return out;
}

std::ofstream Context::open_binary(const std::string& name) const {
  std::ofstream out(path(name), std::ios::binary);
  if (!out) {
    throw esscorr::ValidationError("cannot write " + path(name).string());
  }
  return out;
}

json Context::run_config() const {
  json run{{"out", opts_.out}, {"seed", opts_.seed}, {"timestamp", !opts_.no_timestamp}};
  run["cutoff_override"] = opts_.cutoff ? json(*opts_.cutoff) : json(nullptr);
  json tol{{"verdict", tol_.verdict},
           {"leakage_bound", tol_.leakage_bound},
           {"matrix_hermiticity", tol_.matrix_hermiticity},
           {"click_normalization", tol_.click_normalization},
           {"quadrature_rtol", tol_.quadrature_rtol},
           {"imaginary_residue", tol_.imaginary_residue},
           {"pess_normalization", tol_.pess_normalization},
           {"boundary_mass", tol_.boundary_mass}};
  run["tolerances"] = tol;
  if (!opts_.no_timestamp) {
    run["generated"] = utc_now();
  }
  return run;
}

void Context::write_json(const std::string& name, json doc) const {
  doc["run"] = run_config();
  std::ofstream out(path(name));
  if (!out) {
    throw esscorr::ValidationError("cannot write " + path(name).string());
  }
  out << doc.dump(2) << "\n";
}

Vec3 parse_vec3(const std::vector<double>& v, const std::string& name) {
  if (v.size() != 3) {
    throw esscorr::ValidationError(name + " needs three components");
  }
  return {v[0], v[1], v[2]};
}

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json warnings_json(const esscorr::Warnings& w) {
  json arr = json::array();
  for (const auto& x : w) {
    arr.push_back({{"code", x.code}, {"message", x.message}});
  }
  return arr;
}

json state_json(const esscorr::StateSpec& spec, int cutoff) {
  return json::parse(esscorr::state_to_json(spec, cutoff));
}

std::optional<cplx> closed_form(const esscorr::StateSpec& spec,
                                const esscorr::MeasurementDirection& dir, cplx t, double tau) {
  try {
    return esscorr::mgf_closed_form(spec, dir, t, tau);
  } catch (const esscorr::DomainError&) {
    return std::nullopt;
  }
}

}  // namespace cli
