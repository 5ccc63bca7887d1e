#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"

namespace tsagg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHoursPerYear = 8760.0;

class Noise {
 public:
  explicit Noise(unsigned long long seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  // Box-Muller; the second variate is discarded to keep the stream simple.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 rng_;
};

unsigned long long mix(unsigned long long seed, unsigned long long salt) {
  // splitmix64 finalizer
  unsigned long long z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double daily(double hours) { return kTwoPi * hours / 24.0; }
double annual(double hours) { return kTwoPi * hours / kHoursPerYear; }

// Rectified daily cosine, zero at night, times a seasonal envelope (0.1 in
// midwinter, 1 in midsummer) and a per-day cloudiness factor in [0.55, 1].
std::vector<double> solar(Noise& noise, int n, double dt) {
  std::vector<double> v(n);
  int day = -1;
  double cloud = 1.0;
  for (int t = 0; t < n; ++t) {
    const double h = t * dt;
    if (static_cast<int>(h / 24.0) != day) {
      day = static_cast<int>(h / 24.0);
      cloud = 0.55 + 0.45 * noise.uniform();
    }
    const double sun = std::max(0.0, -std::cos(daily(h)));
    const double season = 0.55 - 0.45 * std::cos(annual(h));
    v[t] = 900.0 * sun * season * cloud;
  }
  return v;
}

// Annual swing of 9 K, daily swing of 4 K peaking mid-afternoon, AR(1) noise.
std::vector<double> temperature(Noise& noise, int n, double dt) {
  std::vector<double> v(n);
  double ar = 0.0;
  for (int t = 0; t < n; ++t) {
    const double h = t * dt;
    ar = 0.9 * ar + 0.65 * noise.normal();
    v[t] = 9.0 - 9.0 * std::cos(annual(h - 480.0)) - 4.0 * std::cos(daily(h - 3.0)) + ar;
  }
  return v;
}

// Strongly autocorrelated noise around a seasonal mean with a faint daily
// cycle; clipped at zero like a wind speed.
std::vector<double> wind(Noise& noise, int n, double dt) {
  std::vector<double> v(n);
  const double phi = 0.97;
  double ar = noise.normal();
  for (int t = 0; t < n; ++t) {
    const double h = t * dt;
    ar = phi * ar + std::sqrt(1.0 - phi * phi) * noise.normal();
    v[t] = std::max(0.0, 5.5 + 1.2 * std::cos(annual(h)) + 0.3 * std::sin(daily(h)) + 2.0 * ar);
  }
  return v;
}

// Standby base load with appliance spikes that are likelier in the morning
// and evening.
std::vector<double> household(Noise& noise, int n, double dt) {
  std::vector<double> v(n);
  for (int t = 0; t < n; ++t) {
    const double h = std::fmod(t * dt, 24.0);
    const bool busy = (h >= 6.0 && h < 9.0) || (h >= 17.0 && h < 22.0);
    const bool night = h < 6.0;
    const double p = busy ? 0.35 : night ? 0.03 : 0.12;
    double load = 0.15 + 0.05 * noise.uniform();
    if (noise.uniform() < p) load += -1.2 * std::log(std::max(noise.uniform(), 1e-12));
    v[t] = load;
  }
  return v;
}

// Daily double peak, lower weekends, higher winter demand.
std::vector<double> regional(Noise& noise, int n, double dt) {
  std::vector<double> v(n);
  for (int t = 0; t < n; ++t) {
    const double h = t * dt;
    const int weekday = static_cast<int>(h / 24.0) % 7;
    const double week = weekday >= 5 ? 0.85 : 1.0;
    const double shape = 1.0 - 0.25 * std::cos(daily(h)) - 0.1 * std::cos(2.0 * daily(h));
    const double season = 1.0 + 0.15 * std::cos(annual(h));
    v[t] = 100.0 * shape * season * week * (1.0 + 0.01 * noise.normal());
  }
  return v;
}

}  // namespace

const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::solar_like: return "solar_like";
    case ProfileKind::temperature_like: return "temperature_like";
    case ProfileKind::wind_like: return "wind_like";
    case ProfileKind::household_load_like: return "household_load_like";
    case ProfileKind::regional_load_like: return "regional_load_like";
  }
  return "?";
}

ProfileKind parse_profile_kind(const std::string& s) {
  for (ProfileKind k : all_profile_kinds())
    if (s == to_string(k)) return k;
  if (s == "solar") return ProfileKind::solar_like;
  if (s == "temperature") return ProfileKind::temperature_like;
  if (s == "wind") return ProfileKind::wind_like;
  if (s == "household") return ProfileKind::household_load_like;
  if (s == "regional") return ProfileKind::regional_load_like;
  fail(ErrorCode::usage, "unknown profile kind '" + s + "'");
}

std::vector<ProfileKind> all_profile_kinds() {
  return {ProfileKind::solar_like, ProfileKind::temperature_like, ProfileKind::wind_like,
          ProfileKind::household_load_like, ProfileKind::regional_load_like};
}

Attribute generate(ProfileKind kind, unsigned long long seed, int n_steps, double step_length_hours) {
  if (n_steps < 48) fail(ErrorCode::usage, "synthetic series need at least 48 steps");
  if (!(step_length_hours > 0.0)) fail(ErrorCode::usage, "step length must be positive");
  Noise noise(mix(seed, static_cast<unsigned long long>(kind)));
  Attribute a;
  a.name = to_string(kind);
  switch (kind) {
    case ProfileKind::solar_like:
      a.unit = "W/m2";
      a.values = solar(noise, n_steps, step_length_hours);
      break;
    case ProfileKind::temperature_like:
      a.unit = "degC";
      a.values = temperature(noise, n_steps, step_length_hours);
      break;
    case ProfileKind::wind_like:
      a.unit = "m/s";
      a.values = wind(noise, n_steps, step_length_hours);
      break;
    case ProfileKind::household_load_like:
      a.unit = "kW";
      a.values = household(noise, n_steps, step_length_hours);
      break;
    case ProfileKind::regional_load_like:
      a.unit = "MW";
      a.values = regional(noise, n_steps, step_length_hours);
      break;
  }
  return a;
}

RawSeriesSet generate_set(const std::vector<ProfileKind>& kinds, unsigned long long seed, int n_steps,
                          double step_length_hours) {
  if (kinds.empty()) fail(ErrorCode::usage, "no profile kinds requested");
  RawSeriesSet s;
  s.step_length_hours = step_length_hours;
  for (ProfileKind k : kinds) {
    if (s.find(to_string(k)) >= 0) fail(ErrorCode::usage, std::string("profile kind listed twice: ") + to_string(k));
    s.attributes.push_back(generate(k, seed, n_steps, step_length_hours));
  }
  return s;
}

}  // namespace tsagg
