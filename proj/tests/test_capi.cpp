// The C interface, linked against the shared library only.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "tsagg/tsagg.h"

namespace fs = std::filesystem;

namespace {

std::string config(const char* name) { return (fs::path(TSAGG_TEST_DATA) / name).string(); }

struct Owned {
  char* p = nullptr;
  ~Owned() { tsagg_string_free(p); }
};

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::strcmp(tsagg_status_name(TSAGG_OK), "ok") == 0);
  CHECK(std::strcmp(tsagg_status_name(TSAGG_ERR_NO_INCUMBENT), "no_incumbent") == 0);
  CHECK(TSAGG_ERR_USAGE == 2);
  CHECK(TSAGG_ERR_DATA == 3);
  CHECK(TSAGG_ERR_INFEASIBLE == 4);
  CHECK(TSAGG_ERR_NO_INCUMBENT == 5);
  CHECK(std::strlen(tsagg_version()) > 0);
}

TEST_CASE("null arguments are usage errors") {
  tsagg_series* s = nullptr;
  CHECK(tsagg_series_read_csv(nullptr, 1.0, &s) == TSAGG_ERR_USAGE);
  CHECK(std::string(tsagg_last_error()).find("path") != std::string::npos);
  CHECK(tsagg_series_synthetic("all", 0, 48, 1.0, nullptr) == TSAGG_ERR_USAGE);
  char* out = nullptr;
  CHECK(tsagg_spectrum_csv(nullptr, &out) == TSAGG_ERR_USAGE);
  CHECK(out == nullptr);
  tsagg_series_free(nullptr);
  tsagg_typical_free(nullptr);
  tsagg_system_free(nullptr);
  tsagg_string_free(nullptr);
  CHECK(tsagg_series_num_steps(nullptr) == 0);
}

TEST_CASE("bad option values map to usage and data") {
  tsagg_series* s = nullptr;
  REQUIRE(tsagg_series_synthetic("solar_like,wind_like", 1, 24 * 10, 1.0, &s) == TSAGG_OK);
  CHECK(tsagg_series_num_attributes(s) == 2);
  CHECK(tsagg_series_num_steps(s) == 240);
  tsagg_aggregate_options o;
  tsagg_aggregate_options_init(&o);
  CHECK(o.n_clusters == 8);
  CHECK(o.steps_per_period == 24);
  tsagg_typical* t = nullptr;
  o.method = "kmedians";
  CHECK(tsagg_aggregate(s, &o, &t) == TSAGG_ERR_USAGE);
  CHECK(t == nullptr);
  o.method = "kmeans";
  o.tail = "wrap";
  CHECK(tsagg_aggregate(s, &o, &t) == TSAGG_ERR_USAGE);
  o.tail = "truncate";
  o.extreme_method = "append";
  o.extremes = "missing_attr:max_step_value";
  CHECK(tsagg_aggregate(s, &o, &t) == TSAGG_ERR_USAGE);
  o.extremes = "wind_like:max_step_value";
  REQUIRE(tsagg_aggregate(s, &o, &t) == TSAGG_OK);
  CHECK(tsagg_typical_num_periods(t) >= 8);
  tsagg_typical_free(t);
  tsagg_series_free(s);
  CHECK(tsagg_series_synthetic("sunny", 0, 48, 1.0, &s) != TSAGG_OK);
}

TEST_CASE("typical set survives write and read") {
  tsagg_series* s = nullptr;
  REQUIRE(tsagg_series_synthetic("household_load_like", 3, 24 * 12, 1.0, &s) == TSAGG_OK);
  tsagg_aggregate_options o;
  tsagg_aggregate_options_init(&o);
  o.n_clusters = 4;
  tsagg_typical* t = nullptr;
  REQUIRE(tsagg_aggregate(s, &o, &t) == TSAGG_OK);
  const auto path = (fs::temp_directory_path() / "tsagg_capi_typical.csv").string();
  REQUIRE(tsagg_typical_write(t, path.c_str()) == TSAGG_OK);
  tsagg_typical* back = nullptr;
  REQUIRE(tsagg_typical_read(path.c_str(), &back) == TSAGG_OK);
  CHECK(tsagg_typical_num_periods(back) == 4);

  Owned a, b;
  REQUIRE(tsagg_indicators_csv(s, t, &a.p) == TSAGG_OK);
  REQUIRE(tsagg_indicators_csv(s, back, &b.p) == TSAGG_OK);
  CHECK(std::string(a.p) == std::string(b.p));

  tsagg_system* sys = nullptr;
  REQUIRE(tsagg_system_load(config("toy_heat_pump.jsonc").c_str(), &sys) == TSAGG_OK);
  Owned r1, r2;
  REQUIRE(tsagg_model_solve(sys, nullptr, t, nullptr, &r1.p) == TSAGG_OK);
  REQUIRE(tsagg_model_solve(sys, nullptr, back, nullptr, &r2.p) == TSAGG_OK);
  const auto obj = [](const char* json) {
    const char* at = std::strstr(json, "\"objective\": ");
    return at ? std::stod(at + 13) : NAN;
  };
  CHECK(obj(r1.p) == doctest::Approx(obj(r2.p)).epsilon(1e-9));

  Owned none;
  CHECK(tsagg_model_solve(sys, s, t, nullptr, &none.p) == TSAGG_ERR_USAGE);
  CHECK(tsagg_model_solve(sys, nullptr, nullptr, nullptr, &none.p) == TSAGG_ERR_USAGE);
  CHECK(none.p == nullptr);

  tsagg_system_free(sys);
  tsagg_typical_free(back);
  tsagg_typical_free(t);
  tsagg_series_free(s);
  fs::remove(path);
  fs::remove(path + ".meta");
}

TEST_CASE("infeasible models report and return status 4") {
  tsagg_series* s = nullptr;
  REQUIRE(tsagg_series_synthetic("household_load_like", 0, 48, 1.0, &s) == TSAGG_OK);
  tsagg_system* sys = nullptr;
  REQUIRE(tsagg_system_load(config("toy_infeasible.jsonc").c_str(), &sys) == TSAGG_OK);
  Owned json;
  CHECK(tsagg_model_solve(sys, s, nullptr, nullptr, &json.p) == TSAGG_ERR_INFEASIBLE);
  REQUIRE(json.p != nullptr);
  CHECK(std::string(json.p).find("\"infeasible\"") != std::string::npos);
  tsagg_system_free(sys);
  tsagg_series_free(s);
}

TEST_CASE("config errors carry the data status") {
  tsagg_system* sys = nullptr;
  CHECK(tsagg_system_load(config("malformed.csv").c_str(), &sys) == TSAGG_ERR_DATA);
  CHECK(sys == nullptr);
  CHECK(tsagg_system_load("/nonexistent.jsonc", &sys) == TSAGG_ERR_IO);
}

TEST_CASE("sweep list parsing") {
  tsagg_series* s = nullptr;
  REQUIRE(tsagg_series_synthetic("household_load_like", 0, 24 * 6, 1.0, &s) == TSAGG_OK);
  tsagg_system* sys = nullptr;
  REQUIRE(tsagg_system_load(config("toy_heat_pump.jsonc").c_str(), &sys) == TSAGG_OK);
  tsagg_sweep_options o;
  tsagg_sweep_options_init(&o);
  o.methods = "hierarchical";
  Owned csv;
  o.n_clusters = "2,x";
  CHECK(tsagg_sweep(sys, s, &o, &csv.p) == TSAGG_ERR_USAGE);
  o.n_clusters = "2,,3";
  CHECK(tsagg_sweep(sys, s, &o, &csv.p) == TSAGG_ERR_USAGE);
  o.n_clusters = "3, 2";
  REQUIRE(tsagg_sweep(sys, s, &o, &csv.p) == TSAGG_OK);
  const std::string text = csv.p;
  CHECK(text.find("hierarchical,2,24,") < text.find("hierarchical,3,24,"));
  tsagg_system_free(sys);
  tsagg_series_free(s);
}
