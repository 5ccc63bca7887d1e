#include "typical.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "csv_io.hpp"
#include "error.hpp"

namespace tsagg {

namespace {

constexpr int kMaxRescalePasses = 100;
constexpr double kMeanTolerance = 1e-9;
constexpr double kZeroSum = 1e-12;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v, const char* sep) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << sep;
    out << v[i];
  }
  return out.str();
}

const char* tail_name(TailPolicy t) { return t == TailPolicy::truncate ? "truncate" : "pad"; }

}  // namespace

RowMatrix rescale_to_mean(const ClusterResult& result, const CandidateMatrix& matrix,
                          RescaleReport* report) {
  const int n_g = matrix.steps_per_period;
  const int n_a = matrix.num_attributes();
  const int n_k = result.num_clusters();
  if (result.representatives.cols() != matrix.values.cols())
    fail(ErrorCode::usage, "representatives do not match the candidate layout");
  long weight_sum = 0;
  for (int w : result.weights) weight_sum += w;
  if (weight_sum != matrix.periods())
    fail(ErrorCode::usage, "cluster weights do not sum to the candidate count");

  RowMatrix mu = result.representatives;
  const double count = static_cast<double>(matrix.periods()) * n_g;
  if (report) *report = RescaleReport{std::vector<int>(n_a, 0), std::vector<double>(n_a, 0.0), {}};
  for (int a = 0; a < n_a; ++a) {
    const auto cols = Eigen::seqN(a * n_g, n_g);
    const double target = matrix.values(Eigen::all, cols).sum();
    auto weighted_sum = [&]() {
      double s = 0.0;
      for (int k = 0; k < n_k; ++k) s += result.weights[k] * mu(k, cols).sum();
      return s;
    };
    const double aggregated = weighted_sum();
    if (aggregated < kZeroSum) {
      if (target >= kZeroSum && report)
        report->warnings.push_back("attribute '" + matrix.attribute_order[a] +
                                   "' aggregates to zero; left unscaled");
      if (report) report->residual[a] = std::abs(target - aggregated) / count;
      continue;
    }
    mu(Eigen::all, cols) *= target / aggregated;
    int pass = 0;
    double residual = 0.0;
    for (; pass < kMaxRescalePasses; ++pass) {
      double clipped = 0.0, free = 0.0;
      for (int k = 0; k < n_k; ++k)
        for (int g = 0; g < n_g; ++g) {
          double& v = mu(k, a * n_g + g);
          if (v >= 1.0) {
            v = 1.0;
            clipped += result.weights[k];
          } else {
            free += result.weights[k] * v;
          }
        }
      residual = std::abs(clipped + free - target) / count;
      if (residual < kMeanTolerance || free <= 0.0) break;
      const double f = (target - clipped) / free;
      for (int k = 0; k < n_k; ++k)
        for (int g = 0; g < n_g; ++g) {
          double& v = mu(k, a * n_g + g);
          if (v < 1.0) v *= f;
        }
    }
    if (report) {
      report->iterations[a] = pass;
      report->residual[a] = residual;
      if (residual >= kMeanTolerance)
        report->warnings.push_back("attribute '" + matrix.attribute_order[a] +
                                   "' keeps a mean residual of " + format_double(residual));
    }
  }
  return mu;
}

int TypicalPeriodSet::find(const std::string& name) const {
  for (std::size_t a = 0; a < attribute_order.size(); ++a)
    if (attribute_order[a] == name) return static_cast<int>(a);
  return -1;
}

void TypicalPeriodSet::validate() const {
  const std::size_t n_a = attribute_order.size();
  if (steps_per_period < 1) fail(ErrorCode::data, "typical period set has no steps per period");
  if (!(step_length_hours > 0.0)) fail(ErrorCode::data, "typical period set has a non-positive step length");
  if (n_a == 0) fail(ErrorCode::data, "typical period set has no attributes");
  if (units.size() != n_a || norm_info.ranges.size() != n_a)
    fail(ErrorCode::data, "typical period set attribute metadata is incomplete");
  if (values.size() != weights.size() || is_extreme.size() != weights.size())
    fail(ErrorCode::data, "typical period set has inconsistent period counts");
  for (const auto& k : values) {
    if (k.size() != n_a) fail(ErrorCode::data, "typical period with wrong attribute count");
    for (const auto& g : k)
      if (static_cast<int>(g.size()) != steps_per_period) fail(ErrorCode::data, "typical period with wrong step count");
  }
  long total = 0;
  for (int w : weights) {
    if (w < 1) fail(ErrorCode::data, "typical period weight below 1");
    total += w;
  }
  if (total != num_candidates())
    fail(ErrorCode::data, "typical period weights sum to " + std::to_string(total) + " but " +
                              std::to_string(num_candidates()) + " candidates are assigned");
  std::vector<int> count(weights.size(), 0);
  for (int k : assignment) {
    if (k < 0 || k >= num_periods()) fail(ErrorCode::data, "assignment refers to a missing typical period");
    ++count[k];
  }
  for (std::size_t k = 0; k < count.size(); ++k)
    if (count[k] != weights[k]) fail(ErrorCode::data, "weight of typical period " + std::to_string(k) + " differs from its member count");
}

TypicalPeriodSet backscale(const RowMatrix& scaled, const ClusterResult& result,
                           const CandidateMatrix& matrix, const Provenance& provenance,
                           const std::vector<std::string>& units) {
  TypicalPeriodSet s;
  const int n_g = matrix.steps_per_period;
  const int n_a = matrix.num_attributes();
  s.steps_per_period = n_g;
  s.step_length_hours = matrix.step_length_hours;
  s.attribute_order = matrix.attribute_order;
  s.units = units.empty() ? std::vector<std::string>(n_a) : units;
  s.norm_info = matrix.norm_info;
  s.weights = result.weights;
  s.assignment = result.assignment;
  s.is_extreme = result.is_extreme;
  s.provenance = provenance;
  s.dropped_tail_steps = matrix.dropped_tail_steps;
  s.padded_steps = matrix.padded_steps;
  s.values.assign(result.num_clusters(), std::vector<std::vector<double>>(n_a, std::vector<double>(n_g)));
  for (int k = 0; k < result.num_clusters(); ++k)
    for (int a = 0; a < n_a; ++a) {
      const auto& r = matrix.norm_info.ranges[a];
      for (int g = 0; g < n_g; ++g) {
        const double v = r.to_physical(scaled(k, a * n_g + g));
        s.values[k][a][g] = std::clamp(v, r.min, r.max);
      }
    }
  s.validate();
  return s;
}

std::vector<std::vector<double>> reconstruct_full(const TypicalPeriodSet& set) {
  std::vector<std::vector<double>> out(set.attribute_order.size());
  for (std::size_t a = 0; a < out.size(); ++a) {
    out[a].reserve(static_cast<std::size_t>(set.num_candidates()) * set.steps_per_period);
    for (int k : set.assignment) out[a].insert(out[a].end(), set.values[k][a].begin(), set.values[k][a].end());
  }
  return out;
}

std::vector<std::vector<double>> reconstruct_normalized(const TypicalPeriodSet& set) {
  auto out = reconstruct_full(set);
  for (std::size_t a = 0; a < out.size(); ++a) {
    const auto& r = set.norm_info.ranges[a];
    for (double& v : out[a]) v = r.degenerate ? 0.0 : (v - r.min) / (r.max - r.min);
  }
  return out;
}

std::filesystem::path meta_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p += ".meta";
  return p;
}

void write_typical_set(const TypicalPeriodSet& set, const std::filesystem::path& csv_path) {
  set.validate();
  for (const auto& name : set.attribute_order)
    if (name.find_first_of(",\n") != std::string::npos)
      fail(ErrorCode::usage, "attribute name '" + name + "' cannot be written (contains a comma)");
  {
    std::ofstream out(csv_path);
    if (!out) fail(ErrorCode::io, "cannot open '" + csv_path.string() + "' for writing");
    out << "cluster,weight,step,attribute,value\n";
    for (int k = 0; k < set.num_periods(); ++k)
      for (std::size_t a = 0; a < set.attribute_order.size(); ++a)
        for (int g = 0; g < set.steps_per_period; ++g)
          out << k << ',' << set.weights[k] << ',' << g << ',' << set.attribute_order[a] << ','
              << format_double(set.values[k][a][g]) << '\n';
    if (!out) fail(ErrorCode::io, "failed writing '" + csv_path.string() + "'");
  }
  std::ofstream meta(meta_path(csv_path));
  if (!meta) fail(ErrorCode::io, "cannot open '" + meta_path(csv_path).string() + "' for writing");
  std::vector<std::string> mins, maxs, extremes;
  for (const auto& r : set.norm_info.ranges) {
    mins.push_back(format_double(r.min));
    maxs.push_back(format_double(r.max));
  }
  for (bool e : set.is_extreme) extremes.push_back(e ? "1" : "0");
  meta << "# typical period set; indices are 0-based\n"
       << "steps_per_period = " << set.steps_per_period << '\n'
       << "step_length_hours = " << format_double(set.step_length_hours) << '\n'
       << "attributes = " << join(set.attribute_order, ",") << '\n'
       << "units = " << join(set.units, ",") << '\n'
       << "min = " << join(mins, ",") << '\n'
       << "max = " << join(maxs, ",") << '\n'
       << "method = " << to_string(set.provenance.method) << '\n'
       << "extreme_method = " << to_string(set.provenance.extreme_method) << '\n'
       << "seed = " << set.provenance.seed << '\n'
       << "tail = " << tail_name(set.provenance.tail) << '\n'
       << "dropped_tail_steps = " << set.dropped_tail_steps << '\n'
       << "padded_steps = " << set.padded_steps << '\n'
       << "extreme_periods = " << join(extremes, " ") << '\n'
       << "assignment = " << join(set.assignment, " ") << '\n';
  if (!meta) fail(ErrorCode::io, "failed writing '" + meta_path(csv_path).string() + "'");
}

TypicalPeriodSet read_typical_set(const std::filesystem::path& csv_path) {
  const auto mpath = meta_path(csv_path);
  std::ifstream meta(mpath);
  if (!meta) fail(ErrorCode::io, "cannot open '" + mpath.string() + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(meta, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::data, mpath.string() + ":" + std::to_string(line_no) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) fail(ErrorCode::data, mpath.string() + ": missing key '" + key + "'");
    return it->second;
  };
  auto number = [&](const std::string& key, const std::string& text) {
    double v;
    if (!parse_double(text, v)) fail(ErrorCode::data, mpath.string() + ": bad number '" + text + "' for '" + key + "'");
    return v;
  };
  auto integer = [&](const std::string& key, const std::string& text) {
    const double v = number(key, text);
    if (v != std::floor(v)) fail(ErrorCode::data, mpath.string() + ": '" + key + "' must be an integer");
    return static_cast<long long>(v);
  };

  TypicalPeriodSet s;
  s.steps_per_period = static_cast<int>(integer("steps_per_period", get("steps_per_period")));
  s.step_length_hours = number("step_length_hours", get("step_length_hours"));
  s.attribute_order = split(get("attributes"), ',');
  s.units = split(get("units"), ',');
  if (s.units.size() < s.attribute_order.size()) s.units.resize(s.attribute_order.size());
  const auto mins = split(get("min"), ','), maxs = split(get("max"), ',');
  if (mins.size() != s.attribute_order.size() || maxs.size() != s.attribute_order.size())
    fail(ErrorCode::data, mpath.string() + ": min/max lists do not match the attributes");
  for (std::size_t a = 0; a < mins.size(); ++a) {
    AttributeRange r{number("min", mins[a]), number("max", maxs[a]), false};
    r.degenerate = r.min == r.max;
    s.norm_info.ranges.push_back(r);
  }
  s.provenance.method = parse_method(get("method"));
  s.provenance.extreme_method = parse_integration_method(get("extreme_method"));
  s.provenance.seed = static_cast<unsigned long long>(integer("seed", get("seed")));
  s.provenance.tail = get("tail") == "pad" ? TailPolicy::pad_repeat_last : TailPolicy::truncate;
  s.dropped_tail_steps = static_cast<int>(integer("dropped_tail_steps", get("dropped_tail_steps")));
  s.padded_steps = static_cast<int>(integer("padded_steps", get("padded_steps")));
  {
    std::istringstream in(get("assignment"));
    std::string tok;
    while (in >> tok) s.assignment.push_back(static_cast<int>(integer("assignment", tok)));
  }
  std::vector<bool> extremes;
  {
    std::istringstream in(get("extreme_periods"));
    std::string tok;
    while (in >> tok) extremes.push_back(tok == "1");
  }

  std::ifstream csv(csv_path);
  if (!csv) fail(ErrorCode::io, "cannot open '" + csv_path.string() + "'");
  line_no = 0;
  std::getline(csv, line);
  ++line_no;
  if (split_csv_line(line) != std::vector<std::string>{"cluster", "weight", "step", "attribute", "value"})
    fail(ErrorCode::data, csv_path.string() + ":1: unexpected header");
  const int n_a = static_cast<int>(s.attribute_order.size());
  const int n_g = s.steps_per_period;
  std::vector<std::vector<bool>> filled;
  auto where = [&]() { return csv_path.string() + ":" + std::to_string(line_no) + ": "; };
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) fail(ErrorCode::data, where() + "expected 5 fields");
    double kd, wd, gd, v;
    if (!parse_double(f[0], kd) || !parse_double(f[1], wd) || !parse_double(f[2], gd) || !parse_double(f[4], v))
      fail(ErrorCode::data, where() + "non-numeric field");
    const int k = static_cast<int>(kd), w = static_cast<int>(wd), g = static_cast<int>(gd);
    const int a = s.find(f[3]);
    if (k < 0 || k != kd || g < 0 || g >= n_g || g != gd || a < 0 || w != wd)
      fail(ErrorCode::data, where() + "cluster, step or attribute out of range");
    if (k >= s.num_periods()) {
      s.values.resize(k + 1, std::vector<std::vector<double>>(n_a, std::vector<double>(n_g, 0.0)));
      s.weights.resize(k + 1, 0);
      filled.resize(k + 1, std::vector<bool>(static_cast<std::size_t>(n_a) * n_g, false));
    }
    if (s.weights[k] != 0 && s.weights[k] != w) fail(ErrorCode::data, where() + "inconsistent weight for cluster " + f[0]);
    s.weights[k] = w;
    s.values[k][a][g] = v;
    filled[k][static_cast<std::size_t>(a) * n_g + g] = true;
  }
  for (std::size_t k = 0; k < filled.size(); ++k)
    for (bool b : filled[k])
      if (!b) fail(ErrorCode::data, csv_path.string() + ": cluster " + std::to_string(k) + " is incomplete");
  s.is_extreme = extremes;
  if (s.is_extreme.size() != s.weights.size()) s.is_extreme.assign(s.weights.size(), false);
  s.validate();
  return s;
}

}  // namespace tsagg
