#pragma once

#include <string>

#include "zk/grid.hpp"

namespace zk {

// ZKF1 snapshot: "ZKF1", u32 LE header length, UTF-8 JSON header
// {"version":1,"n":..,"box":..,"k":..,"time":..}, then n^2 LE float64 samples.
struct SnapshotHeader {
  int version = 1;
  int n = 0;
  double box = 0.0;
  int k = 0;
  double time = 0.0;
};

struct Snapshot {
  SnapshotHeader header;
  Field field;
};

std::string encode_zkf(const Field& f, int k, double time);
Snapshot decode_zkf(const std::string& bytes);

void save_zkf(const std::string& path, const Field& f, int k, double time);
Snapshot load_zkf(const std::string& path);

// Writes to a temporary sibling then renames over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace zk
