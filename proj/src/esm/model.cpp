#include "esm/model.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "error.hpp"
#include "json.hpp"

namespace tsagg::esm {

using solve::Sense;
using solve::Term;
using solve::VarKind;

namespace {

constexpr double kHoursPerYear = 8760.0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Profile value of attribute `a` in period k, step g.
using ProfileLookup = std::function<double(int a, int k, int g)>;

struct Grid {
  int periods;
  int steps;
  double dt;
  std::vector<double> weights;
  bool single_horizon;  // full model: steps are named by t
};

class Builder {
 public:
  Builder(const SystemModel& s, Grid grid, std::function<int(const std::string&)> find_profile,
          ProfileLookup lookup)
      : sys_(s), grid_(std::move(grid)), find_(std::move(find_profile)), lookup_(std::move(lookup)) {}

  BuiltModel build() {
    sys_.validate();
    for (const auto& name : sys_.profile_names())
      if (find_(name) < 0) fail(ErrorCode::data, "system refers to profile '" + name + "', which the input lacks");
    m_.periods = grid_.periods;
    m_.steps = grid_.steps;
    m_.step_length_hours = grid_.dt;
    m_.weights = grid_.weights;
    double hours = 0.0;
    for (double w : grid_.weights) hours += w * grid_.steps * grid_.dt;
    m_.operation_scale = sys_.annualize_operation ? kHoursPerYear / hours : 1.0;

    design_variables();
    flow_variables();
    for (std::size_t d = 0; d < sys_.devices.size(); ++d) device_rows(static_cast<int>(d));
    return std::move(m_);
  }

 private:
  int slots() const { return grid_.periods * grid_.steps; }

  std::string stamp(int k, int g) const {
    return grid_.single_horizon ? std::to_string(g) : std::to_string(k) + "_" + std::to_string(g);
  }

  double coef(const Coefficient& c, int k, int g) const {
    return c.is_profile() ? c.at(lookup_(find_(c.profile), k, g)) : c.constant;
  }

  void design_variables() {
    const int n = static_cast<int>(sys_.devices.size());
    m_.capacity_var.assign(n, -1);
    m_.exist_var.assign(n, -1);
    m_.fixed_capacity.assign(n, kNaN);
    m_.soc_var.assign(n, {});
    auto& p = m_.problem;
    double fixed_cost = 0.0;
    for (int d = 0; d < n; ++d) {
      const Device& dev = sys_.devices[d];
      if (dev.cls == DeviceClass::collector) continue;
      const auto cost = annualized_costs(dev);
      if (dev.fixed_capacity) {
        m_.fixed_capacity[d] = *dev.fixed_capacity;
        if (*dev.fixed_capacity > 0.0) fixed_cost += cost.c_exist + cost.c_spec * *dev.fixed_capacity;
        continue;
      }
      m_.capacity_var[d] = p.add_variable("D_" + dev.name, VarKind::continuous, 0.0, dev.max_capacity, cost.c_spec);
      // Without an existence cost the binary can always be 1, so the
      // capacity bound alone is the same model.
      if (cost.c_exist > 0.0) {
        m_.exist_var[d] = p.add_binary("delta_" + dev.name, cost.c_exist);
        p.add_constraint("bigM_" + dev.name, {{m_.capacity_var[d], 1.0}, {m_.exist_var[d], -dev.max_capacity}},
                         Sense::less_equal, 0.0);
      }
    }
    if (fixed_cost > 0.0) p.add_variable("fixed_costs", VarKind::continuous, 1.0, 1.0, fixed_cost);
  }

  void flow_variables() {
    auto& p = m_.problem;
    inflow_.assign(sys_.devices.size(), {});
    outflow_.assign(sys_.devices.size(), {});
    m_.flow_var.assign(sys_.connections.size(), std::vector<int>(slots()));
    for (std::size_t c = 0; c < sys_.connections.size(); ++c) {
      const Connection& con = sys_.connections[c];
      const int from = sys_.find(con.from), to = sys_.find(con.to);
      outflow_[from].push_back(static_cast<int>(c));
      inflow_[to].push_back(static_cast<int>(c));
      double c_var = con.c_var;
      const Device& f = sys_.devices[from];
      const Device& t = sys_.devices[to];
      if (f.cls == DeviceClass::source_sink) c_var += f.c_var;
      if (t.cls == DeviceClass::source_sink) c_var += t.c_var;
      const std::string base = "E_" + con.from + "_" + con.to + "_" + con.energy + "_";
      for (int k = 0; k < grid_.periods; ++k)
        for (int g = 0; g < grid_.steps; ++g)
          m_.flow_var[c][k * grid_.steps + g] =
              p.add_variable(base + stamp(k, g), VarKind::continuous, 0.0, solve::kInfinity,
                             c_var * grid_.weights[k] * grid_.dt * m_.operation_scale);
    }
  }

  // Flows through a source/sink: outgoing for sources, incoming for sinks.
  const std::vector<int>& own_flows(int d) const {
    return sys_.devices[d].direction == Direction::sink ? inflow_[d] : outflow_[d];
  }

  std::vector<Term> flow_terms(const std::vector<int>& conns, int slot, double scale) const {
    std::vector<Term> t;
    for (int c : conns) t.push_back({m_.flow_var[c][slot], scale});
    return t;
  }

  void device_rows(int d) {
    const Device& dev = sys_.devices[d];
    switch (dev.cls) {
      case DeviceClass::source_sink: source_sink_rows(d); break;
      case DeviceClass::collector: collector_rows(d); break;
      case DeviceClass::transformer: transformer_rows(d); break;
      case DeviceClass::storage: storage_rows(d); break;
    }
  }

  void source_sink_rows(int d) {
    const Device& dev = sys_.devices[d];
    auto& p = m_.problem;
    const auto& flows = own_flows(d);
    if (flows.empty()) return;
    const bool fixed = !std::isnan(m_.fixed_capacity[d]);
    for (int k = 0; k < grid_.periods; ++k)
      for (int g = 0; g < grid_.steps; ++g) {
        const int slot = k * grid_.steps + g;
        const double lb = coef(dev.lower, k, g), ub = coef(dev.upper, k, g);
        const std::string at = "_" + dev.name + "_" + stamp(k, g);
        if (fixed) {
          const double cap = m_.fixed_capacity[d];
          const double lo = lb * cap, up = ub * cap;
          if (flows.size() == 1 && lo <= up && up >= 0.0) {
            // The far end may have bounded the same flow already.
            const int v = m_.flow_var[flows[0]][slot];
            const auto& cur = p.variables()[v];
            const double a = std::max({0.0, lo, cur.lower}), b = std::min(up, cur.upper);
            if (a <= b) {
              p.set_bounds(v, a, b);
              continue;
            }
          }
          if (lo == up) {
            p.add_constraint("fix" + at, flow_terms(flows, slot, 1.0), Sense::equal, lo);
            continue;
          }
          if (lo > 0.0) p.add_constraint("lb" + at, flow_terms(flows, slot, 1.0), Sense::greater_equal, lo);
          p.add_constraint("ub" + at, flow_terms(flows, slot, 1.0), Sense::less_equal, up);
          continue;
        }
        const int D = m_.capacity_var[d];
        auto up = flow_terms(flows, slot, 1.0);
        up.push_back({D, -ub});
        p.add_constraint("ub" + at, std::move(up), Sense::less_equal, 0.0);
        if (lb > 0.0) {
          auto lo = flow_terms(flows, slot, -1.0);
          lo.push_back({D, lb});
          p.add_constraint("lb" + at, std::move(lo), Sense::less_equal, 0.0);
        }
      }
    if (dev.energy_share) {
      const int o = sys_.find(dev.energy_share->of);
      std::map<int, double> acc;
      for (int k = 0; k < grid_.periods; ++k)
        for (int g = 0; g < grid_.steps; ++g) {
          const int slot = k * grid_.steps + g;
          for (int c : own_flows(d)) acc[m_.flow_var[c][slot]] += grid_.weights[k];
          for (int c : own_flows(o)) acc[m_.flow_var[c][slot]] -= dev.energy_share->share * grid_.weights[k];
        }
      std::vector<Term> terms;
      for (const auto& [v, a] : acc)
        if (a != 0.0) terms.push_back({v, a});
      if (!terms.empty()) p.add_constraint("share_" + dev.name, std::move(terms), Sense::less_equal, 0.0);
    }
  }

  void collector_rows(int d) {
    if (inflow_[d].empty() && outflow_[d].empty()) return;
    const Device& dev = sys_.devices[d];
    for (int k = 0; k < grid_.periods; ++k)
      for (int g = 0; g < grid_.steps; ++g) {
        const int slot = k * grid_.steps + g;
        auto terms = flow_terms(inflow_[d], slot, 1.0);
        for (const auto& t : flow_terms(outflow_[d], slot, -1.0)) terms.push_back(t);
        m_.problem.add_constraint("bal_" + dev.name + "_" + stamp(k, g), std::move(terms), Sense::equal, 0.0);
      }
  }

  std::vector<int> of_type(const std::vector<int>& conns, const std::string& energy) const {
    std::vector<int> out;
    for (int c : conns)
      if (sys_.connections[c].energy == energy) out.push_back(c);
    return out;
  }

  void transformer_rows(int d) {
    const Device& dev = sys_.devices[d];
    auto& p = m_.problem;
    for (std::size_t v = 0; v < dev.conversions.size(); ++v) {
      const Conversion& conv = dev.conversions[v];
      const auto ins = of_type(inflow_[d], conv.in);
      const auto outs = of_type(outflow_[d], conv.out);
      if (ins.empty() && outs.empty()) continue;
      for (int k = 0; k < grid_.periods; ++k)
        for (int g = 0; g < grid_.steps; ++g) {
          const int slot = k * grid_.steps + g;
          auto terms = flow_terms(ins, slot, coef(conv.efficiency, k, g));
          for (const auto& t : flow_terms(outs, slot, -1.0)) terms.push_back(t);
          p.add_constraint("conv" + std::to_string(v) + "_" + dev.name + "_" + stamp(k, g), std::move(terms),
                           Sense::equal, 0.0);
        }
    }
    if (inflow_[d].empty()) return;
    // Capacity rates the total input flow.
    for (int k = 0; k < grid_.periods; ++k)
      for (int g = 0; g < grid_.steps; ++g) {
        const int slot = k * grid_.steps + g;
        auto terms = flow_terms(inflow_[d], slot, 1.0);
        const std::string name = "cap_" + dev.name + "_" + stamp(k, g);
        if (m_.capacity_var[d] >= 0) {
          terms.push_back({m_.capacity_var[d], -1.0});
          p.add_constraint(name, std::move(terms), Sense::less_equal, 0.0);
        } else {
          p.add_constraint(name, std::move(terms), Sense::less_equal, m_.fixed_capacity[d]);
        }
      }
  }

  void storage_rows(int d) {
    const Device& dev = sys_.devices[d];
    auto& p = m_.problem;
    const bool fixed = m_.capacity_var[d] < 0;
    auto& soc = m_.soc_var[d];
    soc.resize(slots());
    for (int k = 0; k < grid_.periods; ++k)
      for (int g = 0; g < grid_.steps; ++g)
        soc[k * grid_.steps + g] = p.add_variable("SOC_" + dev.name + "_" + stamp(k, g), VarKind::continuous, 0.0,
                                                  fixed ? m_.fixed_capacity[d] : solve::kInfinity);
    const double keep = 1.0 - dev.eta_self * grid_.dt;
    for (int k = 0; k < grid_.periods; ++k)
      for (int g = 0; g < grid_.steps; ++g) {
        const int slot = k * grid_.steps + g;
        const int next = k * grid_.steps + (g + 1) % grid_.steps;  // cyclic inside the period
        std::map<int, double> acc;
        acc[soc[next]] += 1.0;
        acc[soc[slot]] -= keep;
        for (int c : inflow_[d]) acc[m_.flow_var[c][slot]] -= dev.eta_charge * grid_.dt;
        for (int c : outflow_[d]) acc[m_.flow_var[c][slot]] += grid_.dt / dev.eta_discharge;
        std::vector<Term> terms;
        for (const auto& [v, a] : acc)
          if (a != 0.0) terms.push_back({v, a});
        if (!terms.empty())
          p.add_constraint("soc_" + dev.name + "_" + stamp(k, g), std::move(terms), Sense::equal, 0.0);
        if (!fixed)
          p.add_constraint("socmax_" + dev.name + "_" + stamp(k, g), {{soc[slot], 1.0}, {m_.capacity_var[d], -1.0}},
                           Sense::less_equal, 0.0);
      }
  }

  const SystemModel& sys_;
  Grid grid_;
  std::function<int(const std::string&)> find_;
  ProfileLookup lookup_;
  BuiltModel m_;
  std::vector<std::vector<int>> inflow_, outflow_;
};

void check_step(const SystemModel& s, double dt) {
  if (s.step_length_hours && std::abs(*s.step_length_hours - dt) > 1e-12 * dt)
    fail(ErrorCode::data, "system expects a step length of " + std::to_string(*s.step_length_hours) +
                              " h but the input uses " + std::to_string(dt) + " h");
}

}  // namespace

BuiltModel build_full_model(const SystemModel& system, const RawSeriesSet& profiles) {
  if (profiles.attributes.empty()) fail(ErrorCode::data, "full model needs at least one profile for its horizon");
  profiles.validate();
  check_step(system, profiles.step_length_hours);
  Grid grid{1, static_cast<int>(profiles.steps()), profiles.step_length_hours, {1.0}, true};
  Builder b(
      system, grid, [&](const std::string& n) { return profiles.find(n); },
      [&](int a, int, int g) { return profiles.attributes[a].values[g]; });
  return b.build();
}

BuiltModel build_typical_model(const SystemModel& system, const TypicalPeriodSet& set) {
  set.validate();
  check_step(system, set.step_length_hours);
  std::vector<double> weights(set.weights.begin(), set.weights.end());
  Grid grid{set.num_periods(), set.steps_per_period, set.step_length_hours, weights, false};
  Builder b(
      system, grid, [&](const std::string& n) { return set.find(n); },
      [&](int a, int k, int g) { return set.values[k][a][g]; });
  return b.build();
}

std::vector<DeviceReport> device_reports(const SystemModel& system, const BuiltModel& model,
                                         const std::vector<double>& values) {
  std::vector<DeviceReport> out;
  for (std::size_t d = 0; d < system.devices.size(); ++d) {
    const Device& dev = system.devices[d];
    DeviceReport r{dev.name, dev.cls, false, 0.0};
    if (dev.cls != DeviceClass::collector) {
      if (model.capacity_var[d] >= 0) r.capacity = values.at(model.capacity_var[d]);
      else r.capacity = model.fixed_capacity[d];
      if (std::abs(r.capacity) < 1e-9) r.capacity = 0.0;
      r.exists = model.exist_var[d] >= 0 ? values.at(model.exist_var[d]) > 0.5 : r.capacity > 0.0;
    } else {
      r.exists = true;
    }
    out.push_back(r);
  }
  return out;
}

ModelReport solve_model(const SystemModel& system, const BuiltModel& model, const solve::SolverOptions& options) {
  ModelReport r;
  r.variables = model.problem.num_variables();
  r.constraints = model.problem.num_constraints();
  r.binaries = model.problem.num_binaries();
  const auto sol = r.binaries > 0 ? solve::solve_milp(model.problem, options) : solve::solve_lp(model.problem, options);
  r.status = sol.status;
  r.objective = sol.objective;
  r.gap = sol.gap;
  r.best_bound = sol.best_bound;
  r.stats = sol.stats;
  if (sol.has_solution()) {
    r.values = sol.values;
    r.devices = device_reports(system, model, sol.values);
  }
  return r;
}

std::string report_json(const ModelReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["status"] = solve::to_string(report.status);
  const bool has = !report.values.empty();
  j["objective"] = has ? ordered_json(report.objective) : ordered_json(nullptr);
  j["gap"] = has ? ordered_json(report.gap) : ordered_json(nullptr);
  j["best_bound"] = has ? ordered_json(report.best_bound) : ordered_json(nullptr);
  ordered_json caps = ordered_json::object(), exists = ordered_json::object();
  for (const auto& d : report.devices) {
    if (d.cls == DeviceClass::collector) continue;
    caps[d.name] = d.capacity;
    exists[d.name] = d.exists;
  }
  j["capacities"] = caps;
  j["exists"] = exists;
  j["wall_time_seconds"] = report.stats.wall_seconds;
  j["nodes"] = report.stats.nodes;
  j["iterations"] = report.stats.iterations;
  j["variables"] = report.variables;
  j["constraints"] = report.constraints;
  j["binaries"] = report.binaries;
  return j.dump(2);
}

}  // namespace tsagg::esm
