#include "esscorr/state_json.hpp"

#include "json_util.hpp"

namespace esscorr {

namespace {

using detail::complex_from_json;
using detail::complex_to_json;
using detail::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

StateSpec spec_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "vacuum") {
    return Vacuum{};
  }
  if (kind == "coherent") {
    return Coherent{complex_from_json(j.value("alpha", json(0.0))),
                    complex_from_json(j.value("beta", json(0.0)))};
  }
  if (kind == "hom_input") {
    return HomInput{};
  }
  if (kind == "tmsv") {
    const double xi = j.at("xi").get<double>();
    if (!(xi >= 0.0)) {
      throw ValidationError("squeezing parameter xi must be non-negative");
    }
    return Tmsv{xi};
  }
  if (kind == "mixture") {
    Mixture m;
    for (const auto& c : j.at("components")) {
      m.components.push_back({c.at("weight").get<double>(),
                              complex_from_json(c.value("alpha", json(0.0))),
                              complex_from_json(c.value("beta", json(0.0)))});
    }
    if (m.components.empty()) {
      throw ValidationError("mixture needs at least one component");
    }
    return m;
  }
  throw ValidationError("unknown state kind '" + kind + "'");
}

}  // namespace

StateRequest parse_state_json(const std::string& text) {
  return detail::guarded([&] {
    const json j = json::parse(text);
    StateRequest r{spec_from(j), std::nullopt};
    if (j.contains("cutoff")) {
      const int c = j.at("cutoff").get<int>();
      if (c < 0) {
        throw ValidationError("cutoff must be non-negative");
      }
      r.cutoff = c;
    }
    return r;
  });
}

std::string state_to_json(const StateSpec& spec, std::optional<int> cutoff) {
  json j = std::visit(
      overloaded{
          [](const Vacuum&) { return json{{"kind", "vacuum"}}; },
          [](const Coherent& c) {
            return json{{"kind", "coherent"},
                        {"alpha", complex_to_json(c.alpha)},
                        {"beta", complex_to_json(c.beta)}};
          },
          [](const HomInput&) { return json{{"kind", "hom_input"}}; },
          [](const Tmsv& s) { return json{{"kind", "tmsv"}, {"xi", s.xi}}; },
          [](const Mixture& m) {
            json comps = json::array();
            for (const auto& c : m.components) {
              comps.push_back({{"weight", c.weight},
                               {"alpha", complex_to_json(c.alpha)},
                               {"beta", complex_to_json(c.beta)}});
            }
            return json{{"kind", "mixture"}, {"components", comps}};
          },
      },
      spec);
  if (cutoff) {
    j["cutoff"] = *cutoff;
  }
  return j.dump();
}

}  // namespace esscorr
