#pragma once

#include <nlohmann/json.hpp>

#include "esscorr/fock.hpp"

namespace esscorr::detail {

using nlohmann::json;

inline json complex_to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

/// Accepts {"re": x, "im": y} or a bare real number.
inline cplx complex_from_json(const json& j) {
  if (j.is_number()) {
    return {j.get<double>(), 0.0};
  }
  if (!j.is_object()) {
    throw ValidationError("complex number must be {\"re\":..., \"im\":...} or a number");
  }
  return {j.value("re", 0.0), j.value("im", 0.0)};
}

inline json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

inline Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw ValidationError("3-vector must be an array of three numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json direction_to_json(const MeasurementDirection& d) {
  return json{{"e", vec3_to_json(d.e())},
              {"T", complex_to_json(d.T())},
              {"R", complex_to_json(d.R())}};
}

inline MeasurementDirection direction_from_json(const json& j) {
  if (j.is_array()) {
    return MeasurementDirection::from_vector(vec3_from_json(j));
  }
  if (j.contains("T") && j.contains("R")) {
    return MeasurementDirection::from_beam_splitter(complex_from_json(j.at("T")),
                                                    complex_from_json(j.at("R")));
  }
  return MeasurementDirection::from_vector(vec3_from_json(j.at("e")));
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("malformed JSON: ") + ex.what());
  }
}

}  // namespace esscorr::detail
