#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "csv_io.hpp"
#include "doctest.h"
#include "error.hpp"
#include "oracles/cluster_oracles.hpp"
#include "timeseries.hpp"

using namespace tsagg;

namespace {

RawSeriesSet one(std::vector<double> v, double dt = 1.0) {
  RawSeriesSet s;
  s.step_length_hours = dt;
  s.attributes.push_back({"x", "kW", std::move(v)});
  return s;
}

RawSeriesSet random_set(std::mt19937_64& rng, int n_a, int n_t) {
  std::uniform_real_distribution<double> u(-50.0, 200.0);
  RawSeriesSet s;
  for (int a = 0; a < n_a; ++a) {
    Attribute at{"a" + std::to_string(a), "u", {}};
    for (int t = 0; t < n_t; ++t) at.values.push_back(u(rng));
    s.attributes.push_back(at);
  }
  return s;
}

std::vector<double> sinusoid(int n, double period_h, double amp) {
  std::vector<double> v(n);
  for (int t = 0; t < n; ++t) v[t] = amp * std::sin(2.0 * std::numbers::pi * t / period_h);
  return v;
}

}  // namespace

TEST_CASE("normalize maps onto the unit interval") {
  auto n = normalize(one({2, 4, 6}));
  CHECK(n.values[0] == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(n.info.ranges[0].min == 2.0);
  CHECK(n.info.ranges[0].max == 6.0);
  CHECK_FALSE(n.info.ranges[0].degenerate);

  CHECK(normalize(one({0, 1})).values[0] == std::vector<double>{0.0, 1.0});

  auto c = normalize(one({5, 5, 5}));
  CHECK(c.values[0] == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(c.info.ranges[0].degenerate);
  CHECK(c.info.ranges[0].to_physical(0.0) == 5.0);
}

TEST_CASE("normalize rejects malformed sets") {
  CHECK_THROWS_AS(normalize(RawSeriesSet{}), Error);
  CHECK_THROWS_AS(normalize(one({1.0, NAN})), Error);
  CHECK_THROWS_AS(normalize(one({1.0, INFINITY})), Error);
  CHECK_THROWS_AS(normalize(one({1.0}, 0.0)), Error);
  auto ragged = one({1, 2, 3});
  ragged.attributes.push_back({"y", "", {1, 2}});
  CHECK_THROWS_AS(normalize(ragged), Error);
  auto dup = one({1, 2});
  dup.attributes.push_back({"x", "", {1, 2}});
  CHECK_THROWS_AS(normalize(dup), Error);
}

TEST_CASE("normalization round trip over random sets") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto raw = random_set(rng, 1 + trial % 3, 10 + trial);
    auto n = normalize(raw);
    for (std::size_t a = 0; a < raw.attributes.size(); ++a)
      for (std::size_t t = 0; t < raw.steps(); ++t) {
        const double x = raw.attributes[a].values[t];
        const double back = n.info.ranges[a].to_physical(n.values[a][t]);
        CHECK(std::abs(back - x) <= 1e-12 * std::max(1.0, std::abs(x)) * 200.0);
        CHECK(n.values[a][t] >= 0.0);
        CHECK(n.values[a][t] <= 1.0);
      }
  }
}

TEST_CASE("reshape into periods") {
  SUBCASE("year of two hourly attributes") {
    RawSeriesSet raw;
    raw.attributes.push_back({"p", "", sinusoid(8760, 24, 1.0)});
    raw.attributes.push_back({"q", "", sinusoid(8760, 8760, 3.0)});
    auto m = reshape_to_periods(normalize(raw), 24);
    CHECK(m.periods() == 365);
    CHECK(m.values.cols() == 48);
    CHECK(m.dropped_tail_steps == 0);
  }
  SUBCASE("single period is the input row") {
    auto m = reshape_to_periods(normalize(one({0, 1, 2, 3, 4})), 5);
    REQUIRE(m.periods() == 1);
    for (int g = 0; g < 5; ++g) CHECK(m.at(0, 0, g) == doctest::Approx(g / 4.0));
  }
  SUBCASE("truncated tail") {
    std::vector<double> v(50);
    for (int t = 0; t < 50; ++t) v[t] = t;
    auto m = reshape_to_periods(normalize(one(v)), 24);
    CHECK(m.periods() == 2);
    CHECK(m.dropped_tail_steps == 2);
    CHECK(m.padded_steps == 0);
  }
  SUBCASE("padded tail repeats the last value") {
    std::vector<double> v(50);
    for (int t = 0; t < 50; ++t) v[t] = t;
    auto m = reshape_to_periods(normalize(one(v)), 24, TailPolicy::pad_repeat_last);
    CHECK(m.periods() == 3);
    CHECK(m.padded_steps == 22);
    CHECK(m.dropped_tail_steps == 0);
    CHECK(m.at(2, 0, 1) == 1.0);
    for (int g = 2; g < 24; ++g) CHECK(m.at(2, 0, g) == 1.0);
  }
  SUBCASE("period longer than series") {
    CHECK_THROWS_AS(reshape_to_periods(normalize(one({1, 2, 3})), 4), Error);
    CHECK_THROWS_AS(reshape_to_periods(normalize(one({1, 2, 3})), 0), Error);
  }
}

TEST_CASE("layout: flatten undoes the period interleaving") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n_a = 1 + trial % 4;
    const int n_g = 1 + trial % 7;
    const int n_t = n_g * (1 + trial % 5) + trial % 3;
    if (n_t < n_g) continue;
    auto raw = random_set(rng, n_a, n_t);
    auto norm = normalize(raw);
    for (TailPolicy tail : {TailPolicy::truncate, TailPolicy::pad_repeat_last}) {
      auto m = reshape_to_periods(norm, n_g, tail);
      CHECK(m.values.cols() == n_a * n_g);
      CHECK(m.values.minCoeff() >= 0.0);
      CHECK(m.values.maxCoeff() <= 1.0);
      auto flat = flatten(m);
      REQUIRE(flat.size() == static_cast<std::size_t>(n_a));
      for (int a = 0; a < n_a; ++a) {
        const std::size_t len = flat[a].size();
        CHECK(len == static_cast<std::size_t>(m.periods() * n_g));
        for (std::size_t t = 0; t < len; ++t) {
          const double expect = t < norm.values[a].size() ? norm.values[a][t] : norm.values[a].back();
          CHECK(flat[a][t] == expect);
        }
        for (int i = 0; i < m.periods(); ++i)
          for (int g = 0; g < n_g; ++g) CHECK(m.values(i, a * n_g + g) == flat[a][i * n_g + g]);
      }
    }
  }
}

TEST_CASE("spectrum of a daily sinusoid") {
  auto s = spectrum(one(sinusoid(8760, 24, 2.0)));
  REQUIRE(s.size() == 1);
  CHECK(s[0].lines.size() == 4380);
  auto top = by_amplitude(s[0]);
  CHECK(top[0].frequency == doctest::Approx(1.0 / 24));
  CHECK(top[0].amplitude == doctest::Approx(2.0));
  CHECK(top[1].amplitude < 1e-9);
  for (std::size_t k = 1; k < s[0].lines.size(); ++k)
    CHECK(s[0].lines[k].frequency > s[0].lines[k - 1].frequency);
  CHECK(s[0].lines.front().frequency > 0.0);
}

TEST_CASE("spectrum of a constant") {
  auto s = spectrum(one(std::vector<double>(100, 3.5)));
  for (const auto& l : s[0].lines) CHECK(l.amplitude < 1e-12);
}

TEST_CASE("spectrum of daily plus annual tones") {
  auto d = sinusoid(8760, 24, 1.0);
  auto y = sinusoid(8760, 8760, 1.5);
  for (int t = 0; t < 8760; ++t) d[t] += y[t] + 10.0;
  auto top = by_amplitude(spectrum(one(d))[0]);
  CHECK(top[0].frequency == doctest::Approx(1.0 / 8760));
  CHECK(top[1].frequency == doctest::Approx(1.0 / 24));
}

TEST_CASE("spectrum matches a naive DFT and honours the step length") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int n : {2, 3, 17, 64, 99}) {
    std::vector<double> x(n);
    for (auto& v : x) v = g(rng);
    const double dt = 0.25;
    auto s = spectrum(one(x, dt))[0];
    auto ref = oracle::dft_amplitudes(x);
    REQUIRE(s.lines.size() == ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) {
      CHECK(s.lines[k].amplitude == doctest::Approx(ref[k]).epsilon(1e-9));
      CHECK(s.lines[k].frequency == doctest::Approx((k + 1) / (n * dt)));
    }
  }
}

TEST_CASE("csv reader") {
  SUBCASE("headers with units and a timestamp column") {
    std::istringstream in("\xEF\xBB\xBFtime,load [kW],temp [degC]\n"
                          "2020-01-01T00:00,1.5,-3\n"
                          "2020-01-01T01:00,2.5,-4\n");
    auto s = read_series_csv(in, 1.0);
    REQUIRE(s.attributes.size() == 2);
    CHECK(s.attributes[0].name == "load");
    CHECK(s.attributes[0].unit == "kW");
    CHECK(s.attributes[1].values == std::vector<double>{-3, -4});
  }
  SUBCASE("no timestamp") {
    std::istringstream in("a,b\n1,2\n3,4\n");
    auto s = read_series_csv(in, 0.5);
    CHECK(s.attributes.size() == 2);
    CHECK(s.step_length_hours == 0.5);
    CHECK(s.attributes[0].values == std::vector<double>{1, 3});
  }
  SUBCASE("errors carry the line number") {
    auto message = [](const std::string& text) {
      std::istringstream in(text);
      try {
        read_series_csv(in, 1.0);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::data);
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message("a,b\n1,2\n3\n").find(":3:") != std::string::npos);
    CHECK(message("a,b\n1,2\n3,x\n").find(":3:") != std::string::npos);
    CHECK(message("time,a\n2,1\n1,2\n").find(":3:") != std::string::npos);
    CHECK_FALSE(message("").empty());
    CHECK_FALSE(message("a,a\n1,2\n").empty());
  }
  SUBCASE("write then read") {
    std::mt19937_64 rng(5);
    auto raw = random_set(rng, 3, 20);
    raw.attributes[1].unit = "kWh";
    std::stringstream buf;
    write_series_csv(buf, raw);
    auto back = read_series_csv(buf, 1.0);
    REQUIRE(back.attributes.size() == 3);
    for (int a = 0; a < 3; ++a) {
      CHECK(back.attributes[a].name == raw.attributes[a].name);
      CHECK(back.attributes[a].values == raw.attributes[a].values);
    }
    CHECK(back.attributes[1].unit == "kWh");
  }
}
