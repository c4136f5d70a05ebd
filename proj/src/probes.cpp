#include "zk/probes.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "zk/error.hpp"
#include "zk/initial.hpp"

namespace zk {

void ProbeSuiteConfig::validate() const {
  require(grid.n >= 8 && grid.n % 2 == 0 && grid.box > 0.0, "probe grid needs even n >= 8 and a positive box");
  require(width > 0.0, "width must be positive");
  require(modes.size() >= 2, "need at least two modulation modes");
  for (int m : modes) require(m > 0 && m < grid.n / 2, "modes must lie in (0, n/2)");
  require(window.T > 0.0 && window.time_samples >= 2, "probe window needs T > 0 and at least two samples");
  require(random_fields >= 2, "need at least two random fields");
}

namespace {

std::vector<double> lambdas(const ProbeSuiteConfig& cfg) {
  std::vector<double> out;
  for (int m : cfg.modes) out.push_back(m * std::numbers::pi / cfg.grid.box);
  return out;
}

}  // namespace

std::string classify_growth(const ProbeStats& st) {
  if (st.rows.size() < 2) return "inconclusive";
  const double first = st.rows.front().ratio, last = st.rows.back().ratio;
  if (st.increasing && last >= kGrowingMinFactor * first) return "growing";
  if (st.spread <= kBoundedSpreadMax && !st.increasing) return "bounded";
  return "inconclusive";
}

SmoothingSuite smoothing_suite(const ProbeSuiteConfig& cfg) {
  cfg.validate();
  const auto lam = lambdas(cfg);
  std::vector<Field> fam;
  for (double l : lam) fam.push_back(modulated_gaussian(cfg.grid, l, cfg.width));
  SmoothingSuite s;
  s.stats = smoothing_probe(fam, lam, cfg.window);
  s.pass = s.stats.spread <= kSmoothingSpreadMax && s.stats.torus_valid;
  return s;
}

MaximalSuite maximal_suite(const ProbeSuiteConfig& cfg) {
  cfg.validate();
  const auto lam = lambdas(cfg);
  std::vector<Field> fam;
  for (double l : lam) fam.push_back(anisotropic_packet(cfg.grid, l, cfg.width));
  MaximalSuite m;
  m.s_values = cfg.s_values;
  bool ok = !cfg.s_values.empty();
  for (double s : cfg.s_values) {
    m.stats.push_back(maximal_probe(fam, lam, s, cfg.window));
    m.classes.push_back(classify_growth(m.stats.back()));
    const std::string want = s > 0.75 ? "bounded" : "growing";
    if (m.classes.back() != want || !m.stats.back().torus_valid) ok = false;
  }
  m.pass = ok;
  return m;
}

StrichartzSuite strichartz_suite(const ProbeSuiteConfig& cfg) {
  cfg.validate();
  std::vector<Field> fam;
  std::vector<double> idx;
  for (int i = 0; i < cfg.random_fields; ++i) {
    fam.push_back(random_smooth_field(cfg.grid, cfg.seed + static_cast<std::uint64_t>(i)));
    idx.push_back(i);
  }
  StrichartzSuite s;
  s.stats = strichartz_probe(fam, idx, cfg.theta, cfg.eps, cfg.window);
  s.pass = s.stats.spread <= kStrichartzSpreadMax && s.stats.torus_valid;
  return s;
}

std::string probe_stats_json(const ProbeStats& st) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : st.rows)
    rows.push_back({{"family_index", r.family_index}, {"param", r.param}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", r.ratio}});
  j["rows"] = rows;
  j["max_ratio"] = st.max_ratio;
  j["min_ratio"] = st.min_ratio;
  j["spread"] = st.spread;
  j["increasing"] = st.increasing;
  j["torus_deviation"] = st.torus_deviation;
  j["torus_valid"] = st.torus_valid;
  return j.dump();
}

}  // namespace zk
