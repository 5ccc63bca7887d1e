#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tsagg::esm {

enum class DeviceClass { source_sink, collector, transformer, storage };
enum class Direction { source, sink };

const char* to_string(DeviceClass c);

// A constant, or `offset + scale * profile[t]` for a named attribute.
struct Coefficient {
  double constant = 0.0;
  std::string profile;
  double scale = 1.0;
  double offset = 0.0;

  bool is_profile() const { return !profile.empty(); }
  double at(double profile_value) const { return is_profile() ? offset + scale * profile_value : constant; }
};

struct Conversion {
  std::string in;   // energy type
  std::string out;  // energy type
  Coefficient efficiency;
};

// Caps a source/sink's total energy at `share` times the energy through
// `of` over the horizon.
struct EnergyShareLimit {
  std::string of;
  double share = 0.0;
};

struct Device {
  std::string name;
  DeviceClass cls = DeviceClass::source_sink;
  double capex_exist = 0.0;
  double capex_spec = 0.0;
  double opex_fix_share = 0.0;
  double wacc = 0.08;
  double lifetime_years = 20.0;
  double max_capacity = 0.0;
  // A given capacity turns the design variables into constants.
  std::optional<double> fixed_capacity;

  // source_sink
  Direction direction = Direction::source;
  Coefficient lower{0.0, "", 1.0, 0.0};
  Coefficient upper{1.0, "", 1.0, 0.0};
  double c_var = 0.0;
  std::optional<EnergyShareLimit> energy_share;

  // transformer
  std::vector<Conversion> conversions;

  // storage
  double eta_charge = 1.0;
  double eta_discharge = 1.0;
  double eta_self = 0.0;  // 1/hour
};

struct Connection {
  std::string from;
  std::string to;
  std::string energy;
  double c_var = 0.0;
};

struct SystemModel {
  std::string name;
  std::vector<std::string> energy_types;
  std::vector<Device> devices;
  std::vector<Connection> connections;
  std::optional<double> step_length_hours;
  // Scale operating costs of any horizon to 8760 h.
  bool annualize_operation = true;

  int find(const std::string& device) const;
  std::vector<std::string> profile_names() const;
  // Throws Error(data) on broken references, duplicate names, parameters out
  // of range or sinks without supply.
  void validate() const;
};

// JSON with // and /* */ comments.
SystemModel parse_system(const std::string& text, const std::string& source = "<config>");
SystemModel load_system(const std::filesystem::path& path);

// (1+i)^n i / ((1+i)^n - 1)
double crf(double wacc, double lifetime_years);

struct AnnualizedCosts {
  double c_exist;
  double c_spec;
};
AnnualizedCosts annualized_costs(const Device& d);

}  // namespace tsagg::esm
