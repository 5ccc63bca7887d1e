#include "tsagg/tsagg.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "csv_io.hpp"
#include "error.hpp"
#include "esm/model.hpp"
#include "esm/sweep.hpp"
#include "indicators.hpp"
#include "pipeline.hpp"
#include "solve/milp.hpp"
#include "synthetic.hpp"

struct tsagg_series {
  tsagg::RawSeriesSet raw;
};

struct tsagg_typical {
  tsagg::TypicalPeriodSet set;
};

struct tsagg_system {
  tsagg::esm::SystemModel model;
};

namespace {

using tsagg::Error;
using tsagg::ErrorCode;
using tsagg::fail;

thread_local std::string last_error;

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

// Runs `body`, mapping exceptions onto status codes and the error slot.
template <class F>
tsagg_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return TSAGG_OK;
  } catch (const Error& e) {
    last_error = one_line(e.what());
    return static_cast<tsagg_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TSAGG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = one_line(e.what());
    return TSAGG_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) fail(ErrorCode::usage, std::string(what) + " must not be null");
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::vector<std::string> split_list(const char* text) {
  std::vector<std::string> out;
  if (!text) return out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) fail(ErrorCode::usage, std::string("empty item in list '") + text + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<int> int_list(const char* text, const char* what) {
  std::vector<int> out;
  for (const auto& s : split_list(text)) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (*end != '\0' || v < 1 || v > 1000000)
      fail(ErrorCode::usage, std::string(what) + ": '" + s + "' is not a positive integer");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) fail(ErrorCode::usage, std::string(what) + " is empty");
  return out;
}

std::vector<tsagg::ExtremeSpec> extreme_list(const char* text) {
  std::vector<tsagg::ExtremeSpec> out;
  for (const auto& s : split_list(text)) out.push_back(tsagg::parse_extreme_spec(s));
  return out;
}

tsagg::IntegrationMethod integration(const char* text) {
  return text ? tsagg::parse_integration_method(text) : tsagg::IntegrationMethod::none;
}

tsagg::TailPolicy tail_policy(const char* text) {
  if (!text || std::strcmp(text, "truncate") == 0) return tsagg::TailPolicy::truncate;
  if (std::strcmp(text, "pad") == 0) return tsagg::TailPolicy::pad_repeat_last;
  fail(ErrorCode::usage, std::string("unknown tail policy '") + text + "' (truncate or pad)");
}

tsagg::solve::SolverOptions solver_options(double time_limit, double gap) {
  tsagg::solve::SolverOptions o;
  if (time_limit > 0.0) o.time_limit_seconds = time_limit;
  if (gap >= 0.0) o.gap_tolerance = gap;
  return o;
}

}  // namespace

extern "C" {

const char* tsagg_version(void) { return "1.0.0"; }

const char* tsagg_last_error(void) { return last_error.c_str(); }

const char* tsagg_status_name(tsagg_status status) {
  switch (status) {
    case TSAGG_OK: return "ok";
    case TSAGG_ERR_USAGE: return "usage";
    case TSAGG_ERR_DATA: return "data";
    case TSAGG_ERR_INFEASIBLE: return "infeasible";
    case TSAGG_ERR_NO_INCUMBENT: return "no_incumbent";
    case TSAGG_ERR_IO: return "io";
    case TSAGG_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void tsagg_string_free(char* s) { std::free(s); }

tsagg_status tsagg_series_read_csv(const char* path, double step_length_hours, tsagg_series** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto s = std::make_unique<tsagg_series>();
    s->raw = tsagg::read_series_csv(path, step_length_hours);
    *out = s.release();
  });
}

tsagg_status tsagg_series_synthetic(const char* kinds, unsigned long long seed, int n_steps,
                                    double step_length_hours, tsagg_series** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    std::vector<tsagg::ProfileKind> list;
    if (!kinds || std::strcmp(kinds, "all") == 0) {
      list = tsagg::all_profile_kinds();
    } else {
      for (const auto& k : split_list(kinds)) list.push_back(tsagg::parse_profile_kind(k));
    }
    auto s = std::make_unique<tsagg_series>();
    s->raw = tsagg::generate_set(list, seed, n_steps, step_length_hours);
    *out = s.release();
  });
}

tsagg_status tsagg_series_write_csv(const tsagg_series* series, const char* path) {
  return guarded([&] {
    require(series, "series");
    require(path, "path");
    tsagg::write_series_csv(path, series->raw);
  });
}

tsagg_status tsagg_series_csv(const tsagg_series* series, char** out) {
  return guarded([&] {
    require(series, "series");
    require(out, "out");
    *out = nullptr;
    std::ostringstream os;
    tsagg::write_series_csv(os, series->raw);
    *out = dup(os.str());
  });
}

int tsagg_series_num_attributes(const tsagg_series* series) {
  return series ? static_cast<int>(series->raw.attributes.size()) : 0;
}

int tsagg_series_num_steps(const tsagg_series* series) {
  return series ? static_cast<int>(series->raw.steps()) : 0;
}

void tsagg_series_free(tsagg_series* series) { delete series; }

tsagg_status tsagg_spectrum_csv(const tsagg_series* series, char** out) {
  return guarded([&] {
    require(series, "series");
    require(out, "out");
    *out = nullptr;
    std::ostringstream os;
    os << "attribute,frequency_per_hour,period_hours,amplitude\n";
    for (const auto& s : tsagg::spectrum(series->raw))
      for (const auto& l : tsagg::by_amplitude(s))
        os << s.name << ',' << tsagg::format_double(l.frequency) << ','
           << tsagg::format_double(1.0 / l.frequency) << ',' << tsagg::format_double(l.amplitude) << '\n';
    *out = dup(os.str());
  });
}

void tsagg_aggregate_options_init(tsagg_aggregate_options* o) {
  if (!o) return;
  o->n_clusters = 8;
  o->steps_per_period = 24;
  o->method = "hierarchical";
  o->extremes = nullptr;
  o->extreme_method = "none";
  o->seed = 0;
  o->kmeans_restarts = 10;
  o->kmedoids_time_limit_seconds = 600.0;
  o->tail = "truncate";
}

tsagg_status tsagg_aggregate(const tsagg_series* series, const tsagg_aggregate_options* options,
                             tsagg_typical** out) {
  return guarded([&] {
    require(series, "series");
    require(options, "options");
    require(out, "out");
    *out = nullptr;
    tsagg::AggregationConfig c;
    c.n_clusters = options->n_clusters;
    c.steps_per_period = options->steps_per_period;
    c.method = tsagg::parse_method(options->method ? options->method : "hierarchical");
    c.extremes = extreme_list(options->extremes);
    c.extreme_method = integration(options->extreme_method);
    c.kmeans.seed = options->seed;
    c.kmeans.restarts = options->kmeans_restarts;
    c.kmedoids_time_limit_seconds = options->kmedoids_time_limit_seconds;
    c.tail = tail_policy(options->tail);
    auto t = std::make_unique<tsagg_typical>();
    t->set = tsagg::run_aggregation(series->raw, c).set;
    *out = t.release();
  });
}

tsagg_status tsagg_typical_write(const tsagg_typical* set, const char* path) {
  return guarded([&] {
    require(set, "set");
    require(path, "path");
    tsagg::write_typical_set(set->set, path);
  });
}

tsagg_status tsagg_typical_read(const char* path, tsagg_typical** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto t = std::make_unique<tsagg_typical>();
    t->set = tsagg::read_typical_set(path);
    *out = t.release();
  });
}

int tsagg_typical_num_periods(const tsagg_typical* set) { return set ? set->set.num_periods() : 0; }

void tsagg_typical_free(tsagg_typical* set) { delete set; }

tsagg_status tsagg_indicators_csv(const tsagg_series* original, const tsagg_typical* set, char** out) {
  return guarded([&] {
    require(original, "original");
    require(set, "set");
    require(out, "out");
    *out = nullptr;
    const auto matrix = tsagg::reshape_to_periods(tsagg::normalize(original->raw), set->set.steps_per_period,
                                                  set->set.provenance.tail);
    std::ostringstream os;
    os << "attribute,rmse_profile,rmse_duration\n";
    for (const auto& r : tsagg::score(matrix, set->set))
      os << r.attribute << ',' << tsagg::format_double(r.rmse_profile) << ','
         << tsagg::format_double(r.rmse_duration) << '\n';
    *out = dup(os.str());
  });
}

tsagg_status tsagg_system_load(const char* path, tsagg_system** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto s = std::make_unique<tsagg_system>();
    s->model = tsagg::esm::load_system(path);
    *out = s.release();
  });
}

void tsagg_system_free(tsagg_system* system) { delete system; }

void tsagg_solve_options_init(tsagg_solve_options* o) {
  if (!o) return;
  o->time_limit_seconds = 0.0;
  o->gap_tolerance = 1e-6;
  o->export_lp = nullptr;
}

tsagg_status tsagg_model_solve(const tsagg_system* system, const tsagg_series* profiles,
                               const tsagg_typical* set, const tsagg_solve_options* options,
                               char** report_json) {
  return guarded([&] {
    require(system, "system");
    require(report_json, "report_json");
    *report_json = nullptr;
    if ((profiles == nullptr) == (set == nullptr))
      fail(ErrorCode::usage, "give either full-horizon profiles or a typical period set");
    tsagg_solve_options defaults;
    tsagg_solve_options_init(&defaults);
    const auto& o = options ? *options : defaults;
    const auto model = profiles ? tsagg::esm::build_full_model(system->model, profiles->raw)
                                : tsagg::esm::build_typical_model(system->model, set->set);
    if (o.export_lp) tsagg::solve::export_lp(model.problem, o.export_lp);
    const auto report =
        tsagg::esm::solve_model(system->model, model, solver_options(o.time_limit_seconds, o.gap_tolerance));
    *report_json = dup(tsagg::esm::report_json(report));
    using tsagg::solve::SolveStatus;
    switch (report.status) {
      case SolveStatus::optimal:
      case SolveStatus::time_limit_incumbent:
        break;
      case SolveStatus::infeasible:
        fail(ErrorCode::infeasible, "model is infeasible");
      case SolveStatus::unbounded:
        fail(ErrorCode::infeasible, "model is unbounded");
      case SolveStatus::time_limit_no_incumbent:
        fail(ErrorCode::no_incumbent, "time limit reached without a feasible solution");
    }
  });
}

void tsagg_sweep_options_init(tsagg_sweep_options* o) {
  if (!o) return;
  o->methods = "averaging,kmeans,kmedoids,hierarchical";
  o->n_clusters = "2,4,8";
  o->steps_per_period = "24";
  o->extremes = nullptr;
  o->extreme_method = "none";
  o->seed = 0;
  o->time_limit_seconds = 0.0;
}

tsagg_status tsagg_sweep(const tsagg_system* system, const tsagg_series* profiles,
                         const tsagg_sweep_options* options, char** csv) {
  return guarded([&] {
    require(system, "system");
    require(profiles, "profiles");
    require(options, "options");
    require(csv, "csv");
    *csv = nullptr;
    tsagg::esm::SweepConfig c;
    for (const auto& m : split_list(options->methods)) c.methods.push_back(tsagg::parse_method(m));
    c.n_clusters = int_list(options->n_clusters, "periods");
    c.steps_per_period = int_list(options->steps_per_period, "steps");
    c.extremes = extreme_list(options->extremes);
    c.extreme_method = integration(options->extreme_method);
    c.kmeans.seed = options->seed;
    c.solver = solver_options(options->time_limit_seconds, -1.0);
    std::ostringstream os;
    tsagg::esm::write_sweep_csv(os, tsagg::esm::run_sweep(system->model, profiles->raw, c));
    *csv = dup(os.str());
  });
}

}  // extern "C"
