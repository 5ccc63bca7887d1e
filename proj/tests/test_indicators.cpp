#include <algorithm>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "indicators.hpp"
#include "pipeline.hpp"
#include "synthetic.hpp"

using namespace tsagg;

TEST_CASE("profile and duration rmse examples") {
  CHECK(rmse_profile({{0.3, 0.7}}, {{0.3, 0.7}}) == std::vector<double>{0.0});
  CHECK(rmse_profile({{0, 0}}, {{1, 1}}) == std::vector<double>{100.0});
  CHECK(rmse_profile({{0, 0.5, 1}}, {{0.5, 0.5, 0.5}})[0] == doctest::Approx(40.824829046386306));
  CHECK(rmse_duration({{0, 0.5, 1}}, {{0.5, 0.5, 0.5}})[0] == doctest::Approx(40.824829046386306));
  CHECK(rmse_duration({{0, 1}}, {{1, 0}})[0] == 0.0);
  CHECK(rmse_profile({{0, 1}}, {{1, 0}})[0] == 100.0);
  CHECK_THROWS_AS(rmse_profile({{0, 1}}, {{1}}), Error);
  CHECK_THROWS_AS(rmse_duration({{0}}, {{1}, {0}}), Error);
}

TEST_CASE("duration rmse is zero on permutations and never above profile rmse") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 40;
    std::vector<double> x(n), y(n);
    for (int t = 0; t < n; ++t) {
      x[t] = u(rng);
      y[t] = u(rng);
    }
    const double p = rmse_profile({x}, {y})[0];
    const double d = rmse_duration({x}, {y})[0];
    CHECK(d <= p + 1e-12);
    CHECK(p >= 0.0);
    CHECK(p <= 100.0);
    auto perm = x;
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(rmse_duration({x}, {perm})[0] == 0.0);
  }
}

TEST_CASE("scoring a typical period set") {
  auto raw = generate_set({ProfileKind::solar_like, ProfileKind::regional_load_like}, 9, 24 * 30, 1.0);
  SUBCASE("one cluster per day is exact after shuffling") {
    AggregationConfig cfg;
    cfg.n_clusters = 30;
    cfg.method = Method::kmedoids_exact;
    auto out = run_aggregation(raw, cfg);
    for (const auto& row : score(out.matrix, out.set)) {
      CHECK(row.rmse_duration < 1e-9);
      CHECK(row.rmse_profile < 1e-9);
    }
  }
  SUBCASE("coarse sets score worse than fine ones") {
    double coarse = 0.0, fine = 0.0;
    for (int k : {2, 15}) {
      AggregationConfig cfg;
      cfg.n_clusters = k;
      auto out = run_aggregation(raw, cfg);
      auto rows = score(out.matrix, out.set);
      REQUIRE(rows.size() == 2);
      CHECK(rows[0].attribute == "solar_like");
      for (const auto& r : rows) CHECK(r.rmse_duration <= r.rmse_profile + 1e-12);
      (k == 2 ? coarse : fine) = rows[1].rmse_profile;
    }
    CHECK(fine < coarse);
  }
  SUBCASE("layout mismatch") {
    AggregationConfig cfg;
    cfg.n_clusters = 3;
    auto out = run_aggregation(raw, cfg);
    auto other = reshape_to_periods(normalize(raw), 12);
    CHECK_THROWS_AS(score(other, out.set), Error);
  }
}

TEST_CASE("cluster-result reconstruction lines up with the candidate matrix") {
  auto raw = generate_set({ProfileKind::temperature_like}, 1, 24 * 8, 1.0);
  auto m = reshape_to_periods(normalize(raw), 24);
  auto r = aggregate_averaging(m, 8);
  auto rec = reconstruct_normalized(r, m, r.representatives);
  CHECK(rec == flatten(m));
  CHECK(rmse_profile(flatten(m), rec)[0] == 0.0);
}
