#include "esscorr/csv.hpp"
#include "esscorr/detector.hpp"
#include "json_util.hpp"

namespace esscorr {

namespace {

using detail::json;

json config_json(const ClickDetectorConfig& c) {
  return json{{"D", c.D}, {"eta", c.eta}, {"nu", c.nu}, {"eps", c.eps}};
}

ClickDetectorConfig config_from(const json& j) {
  ClickDetectorConfig c;
  c.D = j.value("D", c.D);
  c.eta = j.value("eta", c.eta);
  c.nu = j.value("nu", c.nu);
  c.eps = j.value("eps", c.eps);
  c.validate();
  return c;
}

template <class M>
json rows_json(const M& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(m(i, j));
    }
    rows.push_back(row);
  }
  return rows;
}

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rows_from(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols) {
      throw ValidationError("ragged matrix in JSON");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = j[i][k].get<Scalar>();
    }
  }
  return m;
}

}  // namespace

std::string to_json(const ClickDetectorConfig& cfg) { return config_json(cfg).dump(); }

ClickDetectorConfig click_config_from_json(const std::string& text) {
  return detail::guarded([&] { return config_from(json::parse(text)); });
}

std::string to_json(const ClickDistribution& clicks) {
  const json j{{"direction", detail::direction_to_json(clicks.direction)},
               {"arm_a", config_json(clicks.arm_a)},
               {"arm_b", config_json(clicks.arm_b)},
               {"probabilities", rows_json(clicks.c)}};
  return j.dump(2);
}

ClickDistribution click_distribution_from_json(const std::string& text) {
  return detail::guarded([&] {
    const json j = json::parse(text);
    ClickDistribution d{rows_from<double>(j.at("probabilities")),
                        detail::direction_from_json(j.at("direction")),
                        config_from(j.at("arm_a")), config_from(j.at("arm_b"))};
    if (d.c.rows() != d.arm_a.D + 1 || d.c.cols() != d.arm_b.D + 1) {
      throw ValidationError("click table shape does not match the detector configuration");
    }
    return d;
  });
}

std::string to_json(const ClickSampleSet& samples) {
  const json j{{"n_total", samples.n_total},
               {"seed", samples.seed},
               {"counts", rows_json(samples.counts)}};
  return j.dump(2);
}

ClickSampleSet click_samples_from_json(const std::string& text) {
  return detail::guarded([&] {
    const json j = json::parse(text);
    ClickSampleSet s;
    s.counts = rows_from<std::int64_t>(j.at("counts"));
    s.n_total = j.at("n_total").get<std::int64_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    if (s.counts.sum() != s.n_total) {
      throw ValidationError("sample counts do not add up to n_total");
    }
    return s;
  });
}

void write_click_csv(std::ostream& out, const ClickDistribution& clicks) {
  CsvWriter csv(out, {"i", "j", "probability"});
  for (Eigen::Index i = 0; i < clicks.c.rows(); ++i) {
    for (Eigen::Index j = 0; j < clicks.c.cols(); ++j) {
      csv << static_cast<int>(i) << static_cast<int>(j) << clicks.c(i, j);
      csv.end_row();
    }
  }
}

void write_click_csv(std::ostream& out, const ClickSampleSet& samples) {
  CsvWriter csv(out, {"i", "j", "count"});
  for (Eigen::Index i = 0; i < samples.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < samples.counts.cols(); ++j) {
      csv << static_cast<int>(i) << static_cast<int>(j)
          << static_cast<long long>(samples.counts(i, j));
      csv.end_row();
    }
  }
}

}  // namespace esscorr
