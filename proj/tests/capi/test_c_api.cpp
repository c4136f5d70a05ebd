// Exercises the shared library through the public C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "zk/zk.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  zk_string_free(s);
  return out;
}

zk_field* gauss(int n, double box, double w, double amp) {
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  const double dx = 2.0 * box / n;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double x = -box + ix * dx, y = -box + iy * dx;
      v[static_cast<std::size_t>(iy) * n + ix] = amp * std::exp(-(x * x + y * y) / (2 * w * w));
    }
  zk_field* f = nullptr;
  REQUIRE(zk_field_create(n, box, v.data(), &f) == ZK_OK);
  return f;
}

int count_calls(double, const zk_field*, void* user) {
  ++*static_cast<int*>(user);
  return 0;
}

int abort_run(double t, const zk_field*, void*) { return t > 0.05 ? 1 : 0; }

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(zk_version()) == "0.1.0");
  CHECK(std::string(zk_status_name(ZK_OK)) == "ok");
  CHECK(std::string(zk_status_name(ZK_ERR_DOMAIN)) == "outside domain");
}

TEST_CASE("field create, inspect, scale, save and load") {
  zk_field* f = gauss(32, 4.0, 1.0, 2.0);
  int n = 0;
  double box = 0.0;
  CHECK(zk_field_grid(f, &n, &box) == ZK_OK);
  CHECK(n == 32);
  CHECK(box == 4.0);
  const double* data = nullptr;
  size_t len = 0;
  CHECK(zk_field_samples(f, &data, &len) == ZK_OK);
  CHECK(len == 32u * 32u);
  CHECK(data[16 * 32 + 16] == doctest::Approx(2.0));
  CHECK(zk_field_scale(f, 0.5) == ZK_OK);
  CHECK(data[16 * 32 + 16] == doctest::Approx(1.0));

  char* js = nullptr;
  CHECK(zk_field_summary(f, 3, &js) == ZK_OK);
  CHECK(take(js).find("\"mass\"") != std::string::npos);

  const std::string path = "capi_field.zkf";
  CHECK(zk_field_save(f, path.c_str(), 3, 1.5) == ZK_OK);
  zk_field* g = nullptr;
  int k = 0;
  double t = 0.0;
  CHECK(zk_field_load(path.c_str(), &g, &k, &t) == ZK_OK);
  CHECK(k == 3);
  CHECK(t == 1.5);
  const double* gd = nullptr;
  CHECK(zk_field_samples(g, &gd, &len) == ZK_OK);
  CHECK(gd[16 * 32 + 16] == data[16 * 32 + 16]);
  std::remove(path.c_str());
  zk_field_free(g);
  zk_field_free(f);
}

TEST_CASE("errors map to status codes and set the message") {
  zk_field* f = nullptr;
  CHECK(zk_field_create(7, 1.0, nullptr, &f) == ZK_ERR_INVALID_ARGUMENT);
  CHECK(std::string(zk_last_error()).size() > 0);
  CHECK(zk_field_load("/nonexistent/dir/x.zkf", &f, nullptr, nullptr) == ZK_ERR_IO);
  CHECK(zk_field_from_descriptor("bogus:1", 32, 4.0, 3, nullptr, &f) == ZK_ERR_INVALID_ARGUMENT);
  CHECK(std::string(zk_last_error()).find("gauss") != std::string::npos);
  char* js = nullptr;
  CHECK(zk_indices(0, &js) == ZK_ERR_INVALID_ARGUMENT);
  CHECK(zk_field_grid(nullptr, nullptr, nullptr) == ZK_ERR_INVALID_ARGUMENT);
  // A successful call clears the message.
  CHECK(zk_indices(8, &js) == ZK_OK);
  CHECK(std::string(zk_last_error()).empty());
  zk_string_free(js);
}

TEST_CASE("config objects reject unknown keys and bad JSON") {
  zk_ground_state* g = nullptr;
  CHECK(zk_groundstate_solve("{\"k\": 3, \"bogus\": 1}", &g) == ZK_ERR_INVALID_ARGUMENT);
  CHECK(std::string(zk_last_error()).find("bogus") != std::string::npos);
  CHECK(zk_groundstate_solve("{\"k\": 3,", &g) == ZK_ERR_INVALID_ARGUMENT);
  CHECK(zk_groundstate_solve("{\"k\": \"three\"}", &g) == ZK_ERR_INVALID_ARGUMENT);
  CHECK(zk_groundstate_solve("{\"k\": 3, \"n\": 64, \"max_iters\": 2}", &g) == ZK_ERR_NOT_CONVERGED);
}

TEST_CASE("ground state, thresholds, descriptors and trap audit") {
  zk_ground_state* g = nullptr;
  REQUIRE(zk_groundstate_solve("{\"k\": 3, \"n\": 256, \"box\": 16}", &g) == ZK_OK);
  CHECK(zk_groundstate_k(g) == 3);
  char* js = nullptr;
  REQUIRE(zk_groundstate_report(g, &js) == ZK_OK);
  CHECK(take(js).find("\"pohozaev\"") != std::string::npos);

  zk_field* u0 = nullptr;
  REQUIRE(zk_field_from_descriptor("qmul:c=0.5,k=3", 256, 16.0, 3, g, &u0) == ZK_OK);
  REQUIRE(zk_threshold_report(u0, g, &js) == ZK_OK);
  const std::string rep = take(js);
  CHECK(rep.find("\"cond_13\": true") != std::string::npos);
  REQUIRE(zk_dichotomy_report(u0, g, &js) == ZK_OK);
  CHECK(take(js).find("\"trapped\"") != std::string::npos);
  REQUIRE(zk_dichotomy_audit(g, "{\"fields\": 4}", &js) == ZK_OK);
  CHECK(take(js).find("\"disagreements\": 0") != std::string::npos);

  zk_run* run = nullptr;
  int calls = 0;
  REQUIRE(zk_evolve(u0, "{\"k\": 3, \"dt\": 0.002, \"T\": 0.2, \"snapshot_stride\": 20, \"boundary_tolerance\": 1}",
                    count_calls, &calls, &run) == ZK_OK);
  CHECK(calls == 6);
  CHECK(zk_run_snapshot_count(run) == 0);
  char* csv = nullptr;
  REQUIRE(zk_run_ledger_csv(run, &csv) == ZK_OK);
  std::string ledger = take(csv);
  int pass = -1;
  REQUIRE(zk_trap_audit(ledger.c_str(), u0, g, &js, &pass) == ZK_OK);
  zk_string_free(js);
  CHECK(pass == 1);
  // Corrupt the trap column of the last row.
  const auto last = ledger.find_last_of('\n', ledger.size() - 2);
  std::string row = ledger.substr(last + 1);
  std::vector<std::string> cols;
  for (std::size_t p = 0, q; p < row.size(); p = q + 1) {
    q = row.find_first_of(",\n", p);
    cols.push_back(row.substr(p, q - p));
  }
  cols[5] = "1e3";
  std::string bad = ledger.substr(0, last + 1);
  for (std::size_t i = 0; i < cols.size(); ++i) bad += cols[i] + (i + 1 < cols.size() ? "," : "\n");
  REQUIRE(zk_trap_audit(bad.c_str(), u0, g, &js, &pass) == ZK_OK);
  zk_string_free(js);
  CHECK(pass == 0);
  CHECK(zk_trap_audit("t,mass\n", u0, g, &js, &pass) == ZK_ERR_IO);

  REQUIRE(zk_run_report(run, &js) == ZK_OK);
  CHECK(take(js).find("\"completed\"") != std::string::npos);
  zk_field* fin = nullptr;
  CHECK(zk_run_final_state(run, &fin) == ZK_OK);
  zk_field_free(fin);
  zk_run_free(run);

  CHECK(zk_evolve(u0, "{\"k\": 3, \"dt\": 0.002, \"T\": 0.2, \"boundary_tolerance\": 1, \"snapshot_stride\": 5}", abort_run,
                  nullptr, &run) == ZK_ERR_INTERNAL);
  CHECK(zk_evolve(u0, "{\"k\": 3, \"dealias\": \"none\"}", nullptr, nullptr, &run) == ZK_ERR_INVALID_ARGUMENT);
  CHECK(zk_evolve(u0, "{\"k\": 3, \"pad\": \"3/2\", \"T\": 0.01, \"dt\": 0.005, \"boundary_tolerance\": 1}", nullptr,
                  nullptr, &run) == ZK_OK);
  zk_run_free(run);
  zk_field_free(u0);
  zk_groundstate_free(g);
}

TEST_CASE("snapshots are kept on request") {
  zk_field* u0 = gauss(32, 8.0, 1.0, 0.1);
  zk_run* run = nullptr;
  REQUIRE(zk_evolve(u0, "{\"k\": 3, \"dt\": 0.05, \"T\": 0.5, \"snapshot_stride\": 5, \"keep_snapshots\": true, \"boundary_tolerance\": 1}",
                    nullptr, nullptr, &run) == ZK_OK);
  char* rep = nullptr;
  zk_run_report(run, &rep);
  const std::string report = take(rep);
  INFO(report);
  CHECK(zk_run_snapshot_count(run) == 3);
  double t = -1.0;
  zk_field* s = nullptr;
  CHECK(zk_run_snapshot(run, 2, &t, &s) == ZK_OK);
  CHECK(t == doctest::Approx(0.5));
  zk_field_free(s);
  CHECK(zk_run_snapshot(run, 3, &t, &s) == ZK_ERR_INVALID_ARGUMENT);
  zk_run_free(run);
  zk_field_free(u0);
}

TEST_CASE("indices") {
  char* js = nullptr;
  REQUIRE(zk_indices(8, &js) == ZK_OK);
  const std::string s = take(js);
  CHECK(s.find("\"s_k\": 0.75") != std::string::npos);
  CHECK(s.find("\"s_k_star\": 0.75") != std::string::npos);
  REQUIRE(zk_indices(2, &js) == ZK_OK);
  CHECK(take(js).find("\"s_k_star\": null") != std::string::npos);
}
