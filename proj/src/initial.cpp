#include "zk/initial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "zk/error.hpp"
#include "zk/io.hpp"

namespace zk {

const std::vector<std::string>& initial_kinds() {
  static const std::vector<std::string> kinds{"gauss", "cosine", "qmul", "file", "random"};
  return kinds;
}

namespace {

std::map<std::string, double> parse_params(const std::string& body, const std::string& kind,
                                           const std::vector<std::string>& allowed) {
  std::map<std::string, double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    require(eq != std::string::npos, kind + ": expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    require(std::find(allowed.begin(), allowed.end(), key) != allowed.end(), kind + ": unknown parameter '" + key + "'");
    try {
      std::size_t used = 0;
      const std::string val = item.substr(eq + 1);
      out[key] = std::stod(val, &used);
      require(used == val.size(), "trailing characters");
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, kind + ": bad number for '" + key + "'");
    }
  }
  return out;
}

double get(const std::map<std::string, double>& m, const std::string& key, double fallback) {
  const auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

double need(const std::map<std::string, double>& m, const std::string& key, const std::string& kind) {
  const auto it = m.find(key);
  require(it != m.end(), kind + ": missing parameter '" + key + "'");
  return it->second;
}

}  // namespace

Field make_initial(const std::string& descriptor, const GridSpec& spec, int k, const GroundStateProvider& ground_state) {
  const auto colon = descriptor.find(':');
  const std::string kind = descriptor.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : descriptor.substr(colon + 1);

  if (kind == "gauss") {
    const auto p = parse_params(body, kind, {"amp", "width", "x0", "y0"});
    const double a = need(p, "amp", kind), w = need(p, "width", kind);
    const double x0 = get(p, "x0", 0.0), y0 = get(p, "y0", 0.0);
    require(w > 0.0, "gauss: width must be positive");
    return Field::from_function(spec, [=](double x, double y) {
      return a * std::exp(-((x - x0) * (x - x0) + (y - y0) * (y - y0)) / (2.0 * w * w));
    });
  }
  if (kind == "cosine") {
    const auto p = parse_params(body, kind, {"amp", "mx", "my"});
    const double a = need(p, "amp", kind), mx = get(p, "mx", 1.0), my = get(p, "my", 0.0);
    const double kk = spec.dk();
    return Field::from_function(spec, [=](double x, double y) { return a * std::cos(mx * kk * x) * std::cos(my * kk * y); });
  }
  if (kind == "qmul") {
    const auto p = parse_params(body, kind, {"c", "k"});
    const double c = need(p, "c", kind);
    const int kq = static_cast<int>(get(p, "k", k));
    require(ground_state != nullptr, "qmul: no ground-state provider available");
    const Field q = ground_state(kq);
    require(q.spec() == spec, "qmul: ground state grid does not match");
    return q.scaled(c);
  }
  if (kind == "file") {
    require(!body.empty(), "file: missing path");
    Snapshot s = load_zkf(body);
    require(s.field.spec() == spec, "file: snapshot grid (n = " + std::to_string(s.header.n) + ", box = " +
                                        std::to_string(s.header.box) + ") does not match the run grid");
    return std::move(s.field);
  }
  if (kind == "random") {
    const auto p = parse_params(body, kind, {"seed", "amp"});
    return random_smooth_field(spec, static_cast<std::uint64_t>(need(p, "seed", kind)), get(p, "amp", 1.0));
  }
  std::string list;
  for (const auto& s : initial_kinds()) list += (list.empty() ? "" : ", ") + s;
  fail(ErrorCode::InvalidArgument, "unknown initial-data kind '" + kind + "' (valid kinds: " + list + ")");
}

Field random_smooth_field(const GridSpec& spec, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int bumps = 1 + static_cast<int>(unit(rng) * 4.0) % 4;
  struct Bump {
    double a, x, y, w;
  };
  std::vector<Bump> bs;
  for (int i = 0; i < bumps; ++i) {
    Bump b;
    b.a = amplitude * (2.0 * unit(rng) - 1.0);
    b.x = (unit(rng) - 0.5) * spec.box * 0.5;
    b.y = (unit(rng) - 0.5) * spec.box * 0.5;
    b.w = 0.6 + 1.9 * unit(rng);
    bs.push_back(b);
  }
  return Field::from_function(spec, [&](double x, double y) {
    double v = 0.0;
    for (const auto& b : bs) v += b.a * std::exp(-((x - b.x) * (x - b.x) + (y - b.y) * (y - b.y)) / (2.0 * b.w * b.w));
    return v;
  });
}

Field modulated_gaussian(const GridSpec& spec, double lambda, double width) {
  require(width > 0.0, "width must be positive");
  return Field::from_function(spec, [=](double x, double y) {
    return std::cos(lambda * x) * std::exp(-(x * x + y * y) / (2.0 * width * width));
  });
}

Field anisotropic_packet(const GridSpec& spec, double lambda, double width) {
  require(width > 0.0 && lambda > 0.0, "width and lambda must be positive");
  return Field::from_function(spec, [=](double x, double y) {
    return std::cos(lambda * x) * std::exp(-(x * x + lambda * lambda * y * y) / (2.0 * width * width));
  });
}

}  // namespace zk
