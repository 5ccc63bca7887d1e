// tsagg command line. Talks to the library through the C interface only.
//
// Failures print one line to stderr,
//   tsagg: error: <kind>: <message>
// and exit with 2 usage, 3 data, 4 infeasible/unbounded, 5 time limit
// without incumbent, 6 io, 7 internal.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "tsagg/tsagg.h"

namespace {

struct Failure {
  tsagg_status status;
  std::string message;
};

void check(tsagg_status st) {
  if (st != TSAGG_OK) throw Failure{st, tsagg_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Series = std::unique_ptr<tsagg_series, Deleter<tsagg_series, tsagg_series_free>>;
using Typical = std::unique_ptr<tsagg_typical, Deleter<tsagg_typical, tsagg_typical_free>>;
using System = std::unique_ptr<tsagg_system, Deleter<tsagg_system, tsagg_system_free>>;

struct CString {
  char* p = nullptr;
  ~CString() { tsagg_string_free(p); }
};

// "-" or empty means stdout.
void emit(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Failure{TSAGG_ERR_IO, "cannot write '" + path + "'"};
}

Series read_series(const std::string& path, double step_hours) {
  tsagg_series* s = nullptr;
  check(tsagg_series_read_csv(path.c_str(), step_hours, &s));
  return Series(s);
}

const char* or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

struct SynthArgs {
  std::string kinds = "all";
  unsigned long long seed = 0;
  int steps = 8760;
  double step_hours = 1.0;
  std::string output;
};

struct AggregateArgs {
  std::string input, output;
  double step_hours = 1.0;
  int periods = 8, steps = 24, restarts = 10;
  std::string method = "hierarchical", extremes, extreme_method = "none", tail = "truncate";
  unsigned long long seed = 0;
  double kmedoids_time_limit = 600.0;
};

struct IndicatorArgs {
  std::string input, typical, output;
  double step_hours = 1.0;
};

struct SpectrumArgs {
  std::string input, output;
  double step_hours = 1.0;
};

struct SolveArgs {
  std::string config, profiles, typical, output, export_lp;
  double step_hours = 1.0, time_limit = 0.0, gap = 1e-6;
};

struct SweepArgs {
  std::string config, input, output;
  double step_hours = 1.0, time_limit = 0.0;
  std::string methods = "averaging,kmeans,kmedoids,hierarchical", periods = "2,4,8", steps = "24";
  std::string extremes, extreme_method = "none";
  unsigned long long seed = 0;
};

void run_synth(const SynthArgs& a) {
  tsagg_series* s = nullptr;
  check(tsagg_series_synthetic(a.kinds.c_str(), a.seed, a.steps, a.step_hours, &s));
  Series series(s);
  CString csv;
  check(tsagg_series_csv(series.get(), &csv.p));
  emit(a.output, csv.p);
}

void run_aggregate(const AggregateArgs& a) {
  auto series = read_series(a.input, a.step_hours);
  tsagg_aggregate_options o;
  tsagg_aggregate_options_init(&o);
  o.n_clusters = a.periods;
  o.steps_per_period = a.steps;
  o.method = a.method.c_str();
  o.extremes = or_null(a.extremes);
  o.extreme_method = a.extreme_method.c_str();
  o.seed = a.seed;
  o.kmeans_restarts = a.restarts;
  o.kmedoids_time_limit_seconds = a.kmedoids_time_limit;
  o.tail = a.tail.c_str();
  tsagg_typical* t = nullptr;
  check(tsagg_aggregate(series.get(), &o, &t));
  Typical set(t);
  check(tsagg_typical_write(set.get(), a.output.c_str()));
}

void run_indicators(const IndicatorArgs& a) {
  auto series = read_series(a.input, a.step_hours);
  tsagg_typical* t = nullptr;
  check(tsagg_typical_read(a.typical.c_str(), &t));
  Typical set(t);
  CString csv;
  check(tsagg_indicators_csv(series.get(), set.get(), &csv.p));
  emit(a.output, csv.p);
}

void run_spectrum(const SpectrumArgs& a) {
  auto series = read_series(a.input, a.step_hours);
  CString csv;
  check(tsagg_spectrum_csv(series.get(), &csv.p));
  emit(a.output, csv.p);
}

void run_solve(const SolveArgs& a) {
  tsagg_system* sys = nullptr;
  check(tsagg_system_load(a.config.c_str(), &sys));
  System system(sys);
  Series series;
  Typical set;
  if (!a.profiles.empty()) {
    series = read_series(a.profiles, a.step_hours);
  } else {
    tsagg_typical* t = nullptr;
    check(tsagg_typical_read(a.typical.c_str(), &t));
    set.reset(t);
  }
  tsagg_solve_options o;
  tsagg_solve_options_init(&o);
  o.time_limit_seconds = a.time_limit;
  o.gap_tolerance = a.gap;
  o.export_lp = or_null(a.export_lp);
  CString json;
  const tsagg_status st = tsagg_model_solve(system.get(), series.get(), set.get(), &o, &json.p);
  const std::string message = tsagg_last_error();
  // An infeasible model still has a report worth keeping.
  if (json.p) emit(a.output, (std::string(json.p) + "\n").c_str());
  if (st != TSAGG_OK) throw Failure{st, message};
}

void run_sweep(const SweepArgs& a) {
  tsagg_system* sys = nullptr;
  check(tsagg_system_load(a.config.c_str(), &sys));
  System system(sys);
  auto series = read_series(a.input, a.step_hours);
  tsagg_sweep_options o;
  tsagg_sweep_options_init(&o);
  o.methods = a.methods.c_str();
  o.n_clusters = a.periods.c_str();
  o.steps_per_period = a.steps.c_str();
  o.extremes = or_null(a.extremes);
  o.extreme_method = a.extreme_method.c_str();
  o.seed = a.seed;
  o.time_limit_seconds = a.time_limit;
  CString csv;
  check(tsagg_sweep(system.get(), series.get(), &o, &csv.p));
  emit(a.output, csv.p);
}

int report(tsagg_status st, const std::string& message) {
  std::string line = message;
  for (char& c : line)
    if (c == '\n' || c == '\r') c = ' ';
  std::fprintf(stderr, "tsagg: error: %s: %s\n", tsagg_status_name(st), line.c_str());
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typical-period aggregation of energy time series and design model runs", "tsagg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tsagg_version()));

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic multi-attribute series as CSV");
  c_synth->add_option("--kinds", synth.kinds, "Comma-separated profile kinds, or all")->capture_default_str();
  c_synth->add_option("--seed", synth.seed)->capture_default_str();
  c_synth->add_option("--steps", synth.steps, "Number of time steps")->capture_default_str();
  c_synth->add_option("--step-hours", synth.step_hours)->capture_default_str();
  c_synth->add_option("-o,--output", synth.output, "CSV file, stdout when omitted");

  AggregateArgs agg;
  auto* c_agg = app.add_subcommand("aggregate", "Aggregate a CSV series into typical periods");
  c_agg->add_option("-i,--input", agg.input, "Series CSV")->required();
  c_agg->add_option("-o,--output", agg.output, "Typical period CSV; metadata goes next to it")->required();
  c_agg->add_option("--step-hours", agg.step_hours)->capture_default_str();
  c_agg->add_option("--periods", agg.periods, "Number of typical periods N_k")->capture_default_str();
  c_agg->add_option("--steps", agg.steps, "Steps per period N_g")->capture_default_str();
  c_agg->add_option("--method", agg.method)
      ->check(CLI::IsMember({"averaging", "kmeans", "kmedoids", "hierarchical"}))
      ->capture_default_str();
  c_agg->add_option("--extremes", agg.extremes, "attr:criterion[,attr:criterion...]");
  c_agg->add_option("--extreme-method", agg.extreme_method)
      ->check(CLI::IsMember({"none", "append", "new-center", "replace"}))
      ->capture_default_str();
  c_agg->add_option("--seed", agg.seed)->capture_default_str();
  c_agg->add_option("--restarts", agg.restarts, "k-means restarts")->capture_default_str();
  c_agg->add_option("--kmedoids-time-limit", agg.kmedoids_time_limit, "Seconds")->capture_default_str();
  c_agg->add_option("--tail", agg.tail)->check(CLI::IsMember({"truncate", "pad"}))->capture_default_str();

  IndicatorArgs ind;
  auto* c_ind = app.add_subcommand("indicators", "RMSE and duration-curve RMSE per attribute");
  c_ind->add_option("-i,--input", ind.input, "Original series CSV")->required();
  c_ind->add_option("-t,--typical", ind.typical, "Typical period CSV")->required();
  c_ind->add_option("--step-hours", ind.step_hours)->capture_default_str();
  c_ind->add_option("-o,--output", ind.output, "CSV file, stdout when omitted");

  SpectrumArgs spec;
  auto* c_spec = app.add_subcommand("spectrum", "Amplitude spectrum per attribute, strongest lines first");
  c_spec->add_option("-i,--input", spec.input, "Series CSV")->required();
  c_spec->add_option("--step-hours", spec.step_hours)->capture_default_str();
  c_spec->add_option("-o,--output", spec.output, "CSV file, stdout when omitted");

  SolveArgs solve;
  auto* c_model = app.add_subcommand("model", "Energy system design model");
  c_model->require_subcommand(1);
  auto* c_solve = c_model->add_subcommand("solve", "Build and solve the model, print the JSON report");
  c_solve->add_option("-c,--config", solve.config, "System configuration (JSON with comments)")->required();
  auto* o_prof = c_solve->add_option("-p,--profiles", solve.profiles, "Full-horizon profile CSV");
  auto* o_typ = c_solve->add_option("-t,--typical", solve.typical, "Typical period CSV");
  o_prof->excludes(o_typ);
  c_solve->add_option("--step-hours", solve.step_hours)->capture_default_str();
  c_solve->add_option("--time-limit", solve.time_limit, "Seconds, 0 for none")->capture_default_str();
  c_solve->add_option("--gap", solve.gap, "Relative MIP gap")->capture_default_str();
  c_solve->add_option("--export-lp", solve.export_lp, "Write the problem in LP format");
  c_solve->add_option("-o,--output", solve.output, "JSON file, stdout when omitted");

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Aggregated vs. full model over methods, N_k and N_g");
  c_sweep->add_option("-c,--config", sweep.config)->required();
  c_sweep->add_option("-i,--input", sweep.input, "Full-horizon profile CSV")->required();
  c_sweep->add_option("--step-hours", sweep.step_hours)->capture_default_str();
  c_sweep->add_option("--methods", sweep.methods)->capture_default_str();
  c_sweep->add_option("--periods", sweep.periods, "Comma-separated N_k")->capture_default_str();
  c_sweep->add_option("--steps", sweep.steps, "Comma-separated N_g")->capture_default_str();
  c_sweep->add_option("--extremes", sweep.extremes);
  c_sweep->add_option("--extreme-method", sweep.extreme_method)
      ->check(CLI::IsMember({"none", "append", "new-center", "replace"}))
      ->capture_default_str();
  c_sweep->add_option("--seed", sweep.seed)->capture_default_str();
  c_sweep->add_option("--time-limit", sweep.time_limit, "Seconds per solve, 0 for none")->capture_default_str();
  c_sweep->add_option("-o,--output", sweep.output, "CSV file, stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    return report(TSAGG_ERR_USAGE, e.what());
  }

  try {
    if (*c_synth) run_synth(synth);
    else if (*c_agg) run_aggregate(agg);
    else if (*c_ind) run_indicators(ind);
    else if (*c_spec) run_spectrum(spec);
    else if (*c_solve) {
      if (solve.profiles.empty() && solve.typical.empty())
        throw Failure{TSAGG_ERR_USAGE, "model solve needs --profiles or --typical"};
      run_solve(solve);
    } else if (*c_sweep) run_sweep(sweep);
  } catch (const Failure& f) {
    return report(f.status, f.message);
  } catch (const std::exception& e) {
    return report(TSAGG_ERR_INTERNAL, e.what());
  }
  return 0;
}
