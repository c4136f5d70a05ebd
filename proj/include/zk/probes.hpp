#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zk/linear_group.hpp"

namespace zk {

// Shared setup of the three dispersive-estimate probe suites.
struct ProbeSuiteConfig {
  GridSpec grid{256, 32.0};
  double width = 2.0;
  std::vector<int> modes{4, 8, 16, 32};  // lambda = m pi / L
  ProbeWindow window{};
  std::vector<double> s_values{0.8, 0.5};  // maximal probe regularities
  double theta = 1.0;                      // Strichartz
  double eps = 0.0;
  int random_fields = 10;
  std::uint64_t seed = 1;

  void validate() const;
};

// Verdict thresholds.
inline constexpr double kSmoothingSpreadMax = 4.0;
inline constexpr double kStrichartzSpreadMax = 5.0;
inline constexpr double kBoundedSpreadMax = 2.0;
inline constexpr double kGrowingMinFactor = 1.5;

// Maximal function classification of one regularity over the packet family.
// bounded: spread <= 2 and not strictly increasing; growing: strictly
// increasing with last/first >= 1.5.
std::string classify_growth(const ProbeStats& st);

struct SmoothingSuite {
  ProbeStats stats;
  bool pass = false;
};
struct MaximalSuite {
  std::vector<double> s_values;
  std::vector<ProbeStats> stats;
  std::vector<std::string> classes;  // "bounded", "growing", "inconclusive"
  bool pass = false;                 // bounded above 3/4 and growing below it
};
struct StrichartzSuite {
  ProbeStats stats;
  bool pass = false;
};

SmoothingSuite smoothing_suite(const ProbeSuiteConfig& cfg);
MaximalSuite maximal_suite(const ProbeSuiteConfig& cfg);
StrichartzSuite strichartz_suite(const ProbeSuiteConfig& cfg);

std::string probe_stats_json(const ProbeStats& st);

}  // namespace zk
