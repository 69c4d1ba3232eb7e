#include <bit>
#include <cstring>

#include "esscorr/csv.hpp"
#include "esscorr/reconstruct.hpp"
#include "esscorr/state_json.hpp"
#include "json_util.hpp"

namespace esscorr {

namespace {

using detail::complex_from_json;
using detail::complex_to_json;
using detail::json;


void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffU);
  }
  out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) {
    throw ValidationError("truncated P_ess binary");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  return v;
}

json grid_json(const Grid3& g) {
  json axes = json::array();
  const char* names[3] = {"S_x", "S_y", "S_z"};
  for (int a = 0; a < 3; ++a) {
    axes.push_back(
        {{"name", names[a]}, {"min", g.axes[a].min}, {"max", g.axes[a].max}, {"n", g.axes[a].n}});
  }
  return json{{"axes", axes}};
}

Grid3 grid_from(const json& j) {
  Grid3 g;
  const auto& axes = j.at("axes");
  if (!axes.is_array() || axes.size() != 3) {
    throw ValidationError("grid needs three axes");
  }
  for (int a = 0; a < 3; ++a) {
    g.axes[a] = Axis{axes[a].at("min").get<double>(), axes[a].at("max").get<double>(),
                     axes[a].at("n").get<int>()};
  }
  g.validate();
  return g;
}

json points_json(const std::vector<CoherentPoint>& points) {
  json comps = json::array();
  for (const auto& p : points) {
    comps.push_back({{"weight", p.weight},
                     {"alpha", complex_to_json(p.alpha)},
                     {"beta", complex_to_json(p.beta)}});
  }
  return comps;
}

}  // namespace

std::string grid_to_json(const Grid3& grid) { return grid_json(grid).dump(); }

Grid3 grid_from_json(const std::string& text) {
  return detail::guarded([&] { return grid_from(json::parse(text)); });
}

void write_pess_binary(std::ostream& out, const PessGrid& p) {
  const json header{{"grid", grid_json(p.grid)},
                    {"tau_used", p.tau_used},
                    {"windowed", p.windowed},
                    {"label", p.label},
                    {"layout", "row-major (S_x, S_y, S_z), S_z fastest"},
                    {"dtype", "float64 little-endian"}};
  const std::string text = header.dump();
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (double v : p.values) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
  }
}

PessGrid read_pess_binary(std::istream& in) {
  const std::uint64_t len = get_u64(in);
  if (len > (1ULL << 24)) {
    throw ValidationError("implausible P_ess header length");
  }
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) {
    throw ValidationError("truncated P_ess header");
  }
  PessGrid p = detail::guarded([&] {
    const json h = json::parse(text);
    PessGrid g;
    g.grid = grid_from(h.at("grid"));
    g.tau_used = h.value("tau_used", 0.0);
    g.windowed = h.value("windowed", false);
    g.label = h.value("label", std::string());
    return g;
  });
  p.values.resize(p.grid.size());
  for (double& v : p.values) {
    v = std::bit_cast<double>(get_u64(in));
  }
  return p;
}

void write_pess_csv(std::ostream& out, const PessGrid& p) {
  CsvWriter csv(out, {"S_x", "S_y", "S_z", "value"});
  const auto& a = p.grid.axes;
  for (int ix = 0; ix < a[0].n; ++ix) {
    for (int iy = 0; iy < a[1].n; ++iy) {
      for (int iz = 0; iz < a[2].n; ++iz) {
        const Vec3 s = p.grid.point(ix, iy, iz);
        csv << s.x() << s.y() << s.z() << p.at(ix, iy, iz);
        csv.end_row();
      }
    }
  }
}

CoherentEnsemble parse_ensemble_json(const std::string& text) {
  CoherentEnsemble e = detail::guarded([&]() -> CoherentEnsemble {
    const json j = json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian_ensemble") {
      return GaussianEnsemble{complex_from_json(j.value("alpha0", json(0.0))),
                              complex_from_json(j.value("beta0", json(0.0))),
                              j.value("nbar_a", 0.0), j.value("nbar_b", 0.0)};
    }
    if (kind == "ensemble") {
      std::vector<CoherentPoint> points;
      for (const auto& c : j.at("components")) {
        points.push_back({c.at("weight").get<double>(),
                          complex_from_json(c.value("alpha", json(0.0))),
                          complex_from_json(c.value("beta", json(0.0)))});
      }
      return points;
    }
    const StateSpec spec = parse_state_json(text).spec;
    if (std::holds_alternative<Vacuum>(spec)) {
      return std::vector<CoherentPoint>{{1.0, 0.0, 0.0}};
    }
    if (const auto* c = std::get_if<Coherent>(&spec)) {
      return std::vector<CoherentPoint>{{1.0, c->alpha, c->beta}};
    }
    if (const auto* m = std::get_if<Mixture>(&spec)) {
      std::vector<CoherentPoint> points;
      for (const auto& c : m->components) {
        points.push_back({c.weight, c.alpha, c.beta});
      }
      return points;
    }
    throw ValidationError("state kind '" + kind + "' is not a coherent ensemble");
  });
  validate_ensemble(e);
  return e;
}

std::string ensemble_to_json(const CoherentEnsemble& ensemble) {
  if (const auto* g = std::get_if<GaussianEnsemble>(&ensemble)) {
    return json{{"kind", "gaussian_ensemble"},
                {"alpha0", complex_to_json(g->alpha0)},
                {"beta0", complex_to_json(g->beta0)},
                {"nbar_a", g->nbar_a},
                {"nbar_b", g->nbar_b}}
        .dump();
  }
  return json{{"kind", "ensemble"},
              {"components", points_json(std::get<std::vector<CoherentPoint>>(ensemble))}}
      .dump();
}

bool is_ensemble_json(const std::string& text) {
  try {
    parse_ensemble_json(text);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

}  // namespace esscorr
