#include "zk/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zk/error.hpp"

namespace zk {

namespace {

constexpr char kMagic[4] = {'Z', 'K', 'F', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

void put_f64(std::string& out, double d) {
  const auto bits = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

double get_f64(const std::string& in, std::size_t at) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string encode_zkf(const Field& f, int k, double time) {
  nlohmann::ordered_json h;
  h["version"] = 1;
  h["n"] = f.spec().n;
  h["box"] = f.spec().box;
  h["k"] = k;
  h["time"] = time;
  const std::string header = h.dump();
  std::string out(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(header.size()));
  out += header;
  out.reserve(out.size() + 8 * f.spec().size());
  for (double v : f.samples()) put_f64(out, v);
  return out;
}

Snapshot decode_zkf(const std::string& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) fail(ErrorCode::Io, "not a ZKF1 file (bad magic)");
  const std::uint32_t hlen = get_u32(bytes, 4);
  if (bytes.size() < 8ull + hlen) fail(ErrorCode::Io, "truncated ZKF1 header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(bytes.substr(8, hlen));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Io, std::string("malformed ZKF1 header: ") + e.what());
  }
  Snapshot snap;
  try {
    snap.header.version = h.at("version").get<int>();
    snap.header.n = h.at("n").get<int>();
    snap.header.box = h.at("box").get<double>();
    snap.header.k = h.at("k").get<int>();
    snap.header.time = h.at("time").get<double>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Io, std::string("ZKF1 header missing key: ") + e.what());
  }
  if (snap.header.version != 1) fail(ErrorCode::Io, "unsupported ZKF1 version " + std::to_string(snap.header.version));
  const GridSpec spec(snap.header.n, snap.header.box);
  const std::size_t body = 8ull + hlen;
  if (bytes.size() != body + 8 * spec.size()) fail(ErrorCode::Io, "ZKF1 payload size does not match n^2 samples");
  std::vector<double> s(spec.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = get_f64(bytes, body + 8 * i);
  snap.field = Field(spec, std::move(s));
  return snap;
}

void save_zkf(const std::string& path, const Field& f, int k, double time) {
  write_file_atomic(path, encode_zkf(f, k, time));
}

Snapshot load_zkf(const std::string& path) { return decode_zkf(read_file(path)); }

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) fail(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) fail(ErrorCode::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace zk
