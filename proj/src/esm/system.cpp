#include "esm/system.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "error.hpp"
#include "json.hpp"

namespace tsagg::esm {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorCode::data, where + ": " + what);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; });
    if (!known) bad(where, "unknown key '" + it.key() + "'");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(where, "not finite");
  return v;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

Coefficient coefficient(const json& j, const std::string& where) {
  Coefficient c;
  if (j.is_number()) {
    c.constant = number(j, where);
    return c;
  }
  if (!j.is_object() || !j.contains("profile")) bad(where, "expected a number or {\"profile\": ...}");
  only_keys(j, where, {"profile", "scale", "offset"});
  c.profile = text(j.at("profile"), where + ".profile");
  c.scale = number_or(j, "scale", 1.0, where);
  c.offset = number_or(j, "offset", 0.0, where);
  return c;
}

DeviceClass device_class(const std::string& s, const std::string& where) {
  if (s == "source_sink") return DeviceClass::source_sink;
  if (s == "collector") return DeviceClass::collector;
  if (s == "transformer") return DeviceClass::transformer;
  if (s == "storage") return DeviceClass::storage;
  bad(where, "unknown device class '" + s + "'");
}

Device device(const json& j, const json& defaults, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  only_keys(j, where,
            {"name", "class", "capex_exist", "capex_spec", "opex_fix_share", "wacc", "lifetime_years",
             "max_capacity", "capacity", "direction", "lower", "upper", "c_var", "max_energy_share",
             "conversions", "eta_charge", "eta_discharge", "eta_self", "note"});
  Device d;
  d.name = text(j.value("name", json()), where + ".name");
  const std::string at = where + " '" + d.name + "'";
  d.cls = device_class(text(j.value("class", json()), at + ".class"), at);
  auto param = [&](const char* key, double fallback) {
    if (j.contains(key)) return number(j.at(key), at + "." + key);
    if (defaults.contains(key)) return number(defaults.at(key), "defaults." + std::string(key));
    return fallback;
  };
  d.capex_exist = param("capex_exist", 0.0);
  d.capex_spec = param("capex_spec", 0.0);
  d.opex_fix_share = param("opex_fix_share", 0.0);
  d.wacc = param("wacc", 0.08);
  d.lifetime_years = param("lifetime_years", 20.0);
  d.max_capacity = param("max_capacity", 0.0);
  if (j.contains("capacity")) d.fixed_capacity = number(j.at("capacity"), at + ".capacity");

  const bool ss = d.cls == DeviceClass::source_sink;
  const bool tr = d.cls == DeviceClass::transformer;
  const bool st = d.cls == DeviceClass::storage;
  auto only_for = [&](const char* key, bool ok) {
    if (j.contains(key) && !ok) bad(at, std::string("'") + key + "' does not apply to a " + to_string(d.cls));
  };
  for (const char* k : {"direction", "lower", "upper", "c_var", "max_energy_share"}) only_for(k, ss);
  only_for("conversions", tr);
  for (const char* k : {"eta_charge", "eta_discharge", "eta_self"}) only_for(k, st);

  if (ss) {
    const std::string dir = j.contains("direction") ? text(j.at("direction"), at + ".direction") : "source";
    if (dir == "source") d.direction = Direction::source;
    else if (dir == "sink") d.direction = Direction::sink;
    else bad(at + ".direction", "expected \"source\" or \"sink\"");
    if (j.contains("lower")) d.lower = coefficient(j.at("lower"), at + ".lower");
    if (j.contains("upper")) d.upper = coefficient(j.at("upper"), at + ".upper");
    d.c_var = number_or(j, "c_var", 0.0, at);
    if (j.contains("max_energy_share")) {
      const auto& s = j.at("max_energy_share");
      only_keys(s, at + ".max_energy_share", {"of", "share"});
      d.energy_share = EnergyShareLimit{text(s.value("of", json()), at + ".max_energy_share.of"),
                                        number(s.value("share", json()), at + ".max_energy_share.share")};
    }
  }
  if (tr) {
    const auto& list = j.value("conversions", json::array());
    if (!list.is_array() || list.empty()) bad(at, "a transformer needs a non-empty 'conversions' list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string w = at + ".conversions[" + std::to_string(i) + "]";
      only_keys(list[i], w, {"in", "out", "efficiency"});
      d.conversions.push_back({text(list[i].value("in", json()), w + ".in"),
                               text(list[i].value("out", json()), w + ".out"),
                               coefficient(list[i].value("efficiency", json()), w + ".efficiency")});
    }
  }
  if (st) {
    d.eta_charge = number_or(j, "eta_charge", 1.0, at);
    d.eta_discharge = number_or(j, "eta_discharge", 1.0, at);
    d.eta_self = number_or(j, "eta_self", 0.0, at);
  }
  return d;
}

}  // namespace

const char* to_string(DeviceClass c) {
  switch (c) {
    case DeviceClass::source_sink: return "source_sink";
    case DeviceClass::collector: return "collector";
    case DeviceClass::transformer: return "transformer";
    case DeviceClass::storage: return "storage";
  }
  return "?";
}

int SystemModel::find(const std::string& device) const {
  for (std::size_t i = 0; i < devices.size(); ++i)
    if (devices[i].name == device) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> SystemModel::profile_names() const {
  std::set<std::string> names;
  auto add = [&](const Coefficient& c) {
    if (c.is_profile()) names.insert(c.profile);
  };
  for (const auto& d : devices) {
    add(d.lower);
    add(d.upper);
    for (const auto& c : d.conversions) add(c.efficiency);
  }
  return {names.begin(), names.end()};
}

void SystemModel::validate() const {
  if (devices.empty()) fail(ErrorCode::data, "system has no devices");
  std::set<std::string> names, types(energy_types.begin(), energy_types.end());
  if (types.size() != energy_types.size()) fail(ErrorCode::data, "energy types listed twice");
  for (const auto& d : devices) {
    const std::string at = "device '" + d.name + "'";
    if (d.name.empty()) fail(ErrorCode::data, "device without a name");
    if (!names.insert(d.name).second) fail(ErrorCode::data, at + " is declared twice");
    if (d.cls == DeviceClass::collector) continue;
    if (!(d.wacc > 0.0 && d.wacc < 1.0)) fail(ErrorCode::data, at + ": wacc must lie in (0,1)");
    if (!(d.lifetime_years > 0.0)) fail(ErrorCode::data, at + ": lifetime_years must be positive");
    if (d.capex_exist < 0.0 || d.capex_spec < 0.0 || d.opex_fix_share < 0.0)
      fail(ErrorCode::data, at + ": costs must be nonnegative");
    if (d.fixed_capacity) {
      if (*d.fixed_capacity < 0.0) fail(ErrorCode::data, at + ": capacity must be nonnegative");
    } else if (!(d.max_capacity > 0.0)) {
      fail(ErrorCode::data, at + ": max_capacity must be positive (it is the big-M bound)");
    }
    if (d.cls == DeviceClass::source_sink) {
      if (d.energy_share) {
        const int o = find(d.energy_share->of);
        if (o < 0 || devices[o].cls != DeviceClass::source_sink)
          fail(ErrorCode::data, at + ": max_energy_share refers to unknown source/sink '" + d.energy_share->of + "'");
        if (d.energy_share->share < 0.0) fail(ErrorCode::data, at + ": max_energy_share.share must be nonnegative");
      }
    }
    if (d.cls == DeviceClass::transformer)
      for (const auto& c : d.conversions) {
        if (!types.count(c.in) || !types.count(c.out))
          fail(ErrorCode::data, at + ": conversion uses an undeclared energy type");
        if (!c.efficiency.is_profile() && !(c.efficiency.constant > 0.0))
          fail(ErrorCode::data, at + ": conversion efficiency must be positive");
      }
    if (d.cls == DeviceClass::storage) {
      if (!(d.eta_charge > 0.0 && d.eta_charge <= 1.0) || !(d.eta_discharge > 0.0 && d.eta_discharge <= 1.0))
        fail(ErrorCode::data, at + ": storage efficiencies must lie in (0,1]");
      if (d.eta_self < 0.0 || d.eta_self >= 1.0) fail(ErrorCode::data, at + ": eta_self must lie in [0,1)");
    }
  }

  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::vector<int> in_count(devices.size(), 0), out_count(devices.size(), 0);
  for (const auto& c : connections) {
    const std::string at = "connection " + c.from + " -> " + c.to;
    const int f = find(c.from), t = find(c.to);
    if (f < 0 || t < 0) fail(ErrorCode::data, at + ": unknown device");
    if (f == t) fail(ErrorCode::data, at + ": a device cannot feed itself");
    if (!types.count(c.energy)) fail(ErrorCode::data, at + ": undeclared energy type '" + c.energy + "'");
    if (!seen.insert({c.from, c.to, c.energy}).second) fail(ErrorCode::data, at + " is declared twice for " + c.energy);
    ++out_count[f];
    ++in_count[t];
    for (int end : {f, t}) {
      const Device& d = devices[end];
      if (d.cls != DeviceClass::transformer) continue;
      const bool is_input = end == t;
      const bool used = std::any_of(d.conversions.begin(), d.conversions.end(), [&](const Conversion& v) {
        return (is_input ? v.in : v.out) == c.energy;
      });
      if (!used)
        fail(ErrorCode::data, at + ": transformer '" + d.name + "' has no conversion " +
                                  (is_input ? "from " : "to ") + c.energy);
    }
  }
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const Device& d = devices[i];
    const std::string at = "device '" + d.name + "'";
    if (d.cls == DeviceClass::source_sink) {
      const bool sink = d.direction == Direction::sink;
      if ((sink ? in_count[i] : out_count[i]) == 0) {
        if (d.lower.is_profile() || d.lower.constant > 0.0)
          fail(ErrorCode::data, at + ": demand has no connection that could supply it");
      }
      if ((sink ? out_count[i] : in_count[i]) > 0)
        fail(ErrorCode::data, at + ": a " + std::string(sink ? "sink" : "source") + " cannot have " +
                                  (sink ? "outgoing" : "incoming") + " connections");
    }
    if (d.cls == DeviceClass::collector && (in_count[i] == 0 || out_count[i] == 0) && in_count[i] + out_count[i] > 0)
      fail(ErrorCode::data, at + ": collector needs both inputs and outputs");
  }
}

SystemModel parse_system(const std::string& content, const std::string& source) {
  json j;
  try {
    j = json::parse(content, nullptr, true, true);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::data, source + ": " + e.what());
  }
  if (!j.is_object()) bad(source, "expected a JSON object");
  only_keys(j, source, {"name", "energy_types", "defaults", "devices", "connections", "step_length_hours",
                        "annualize_operation", "note"});
  SystemModel s;
  s.name = j.contains("name") ? text(j.at("name"), source + ".name") : "";
  for (const auto& e : j.value("energy_types", json::array())) s.energy_types.push_back(text(e, source + ".energy_types"));
  const json defaults = j.value("defaults", json::object());
  only_keys(defaults, source + ".defaults",
            {"capex_exist", "capex_spec", "opex_fix_share", "wacc", "lifetime_years", "max_capacity"});
  const auto& devices = j.value("devices", json::array());
  if (!devices.is_array()) bad(source, "'devices' must be a list");
  for (std::size_t i = 0; i < devices.size(); ++i)
    s.devices.push_back(device(devices[i], defaults, source + ".devices[" + std::to_string(i) + "]"));
  const auto& conns = j.value("connections", json::array());
  if (!conns.is_array()) bad(source, "'connections' must be a list");
  for (std::size_t i = 0; i < conns.size(); ++i) {
    const std::string w = source + ".connections[" + std::to_string(i) + "]";
    only_keys(conns[i], w, {"from", "to", "energy", "c_var"});
    s.connections.push_back({text(conns[i].value("from", json()), w + ".from"),
                             text(conns[i].value("to", json()), w + ".to"),
                             text(conns[i].value("energy", json()), w + ".energy"),
                             number_or(conns[i], "c_var", 0.0, w)});
  }
  if (j.contains("step_length_hours")) s.step_length_hours = number(j.at("step_length_hours"), source + ".step_length_hours");
  if (j.contains("annualize_operation")) {
    if (!j.at("annualize_operation").is_boolean()) bad(source + ".annualize_operation", "expected true or false");
    s.annualize_operation = j.at("annualize_operation").get<bool>();
  }
  s.validate();
  return s;
}

SystemModel load_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str(), path.string());
}

double crf(double wacc, double lifetime_years) {
  if (!(wacc > 0.0 && wacc < 1.0)) fail(ErrorCode::usage, "wacc must lie in (0,1)");
  if (!(lifetime_years > 0.0)) fail(ErrorCode::usage, "lifetime must be positive");
  const double grow = std::expm1(lifetime_years * std::log1p(wacc));  // (1+i)^n - 1
  return (grow + 1.0) * wacc / grow;
}

AnnualizedCosts annualized_costs(const Device& d) {
  if (d.cls == DeviceClass::collector) return {0.0, 0.0};
  const double f = crf(d.wacc, d.lifetime_years) + d.opex_fix_share;
  return {d.capex_exist * f, d.capex_spec * f};
}

}  // namespace tsagg::esm
