#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "error.hpp"
#include "solve/milp.hpp"

namespace tsagg::solve {

namespace {

constexpr int kTermsPerLine = 6;

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> unique_names(std::vector<std::string> names, const char* fallback) {
  std::unordered_set<std::string> taken;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string base = names[i].empty() ? fallback + std::to_string(i) : sanitize_lp_name(names[i]);
    std::string candidate = base;
    for (int k = 1; taken.count(candidate); ++k) candidate = base + "_" + std::to_string(k);
    taken.insert(candidate);
    names[i] = std::move(candidate);
  }
  return names;
}

void write_terms(std::ostringstream& out, const std::vector<std::pair<int, double>>& terms,
                 const std::vector<std::string>& names) {
  int on_line = 0;
  bool first = true;
  for (const auto& [var, coef] : terms) {
    if (on_line == kTermsPerLine) {
      out << "\n   ";
      on_line = 0;
    }
    if (first) {
      out << (coef < 0 ? " - " : " ") << number(std::abs(coef)) << ' ' << names[var];
      first = false;
    } else {
      out << (coef < 0 ? " - " : " + ") << number(std::abs(coef)) << ' ' << names[var];
    }
    ++on_line;
  }
}

}  // namespace

std::string sanitize_lp_name(const std::string& name) {
  std::string s;
  s.reserve(name.size() + 1);
  for (unsigned char ch : name) s.push_back(std::isalnum(ch) || ch == '_' ? char(ch) : '_');
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) s.insert(s.begin(), '_');
  return s;
}

std::string to_lp_string(const MilpProblem& problem) {
  std::vector<std::string> vnames, cnames;
  for (const auto& v : problem.variables()) vnames.push_back(v.name);
  for (const auto& c : problem.constraints()) cnames.push_back(c.name);
  vnames = unique_names(std::move(vnames), "x");
  cnames = unique_names(std::move(cnames), "c");

  std::ostringstream out;
  out << "\\ written by tsagg\n";
  out << "Minimize\n obj:";
  std::vector<std::pair<int, double>> obj;
  for (std::size_t j = 0; j < problem.num_variables(); ++j)
    if (problem.objective()[j] != 0.0) obj.emplace_back(static_cast<int>(j), problem.objective()[j]);
  if (obj.empty() && problem.num_variables() > 0) obj.emplace_back(0, 0.0);
  write_terms(out, obj, vnames);
  out << '\n';

  if (problem.num_constraints() > 0) {
    out << "Subject To\n";
    for (std::size_t i = 0; i < problem.num_constraints(); ++i) {
      const auto& c = problem.constraints()[i];
      std::vector<std::pair<int, double>> terms;
      for (const auto& t : c.terms) terms.emplace_back(t.var, t.coef);
      out << ' ' << cnames[i] << ':';
      write_terms(out, terms, vnames);
      const char* sense = c.sense == Sense::less_equal ? " <= " : c.sense == Sense::greater_equal ? " >= " : " = ";
      out << sense << number(c.rhs) << '\n';
    }
  }

  out << "Bounds\n";
  for (std::size_t j = 0; j < problem.num_variables(); ++j) {
    const auto& v = problem.variables()[j];
    const auto& nm = vnames[j];
    const bool lo_inf = v.lower == -kInfinity, up_inf = v.upper == kInfinity;
    if (lo_inf && up_inf) {
      out << ' ' << nm << " free\n";
    } else if (v.lower == v.upper) {
      out << ' ' << nm << " = " << number(v.lower) << '\n';
    } else if (up_inf) {
      out << ' ' << nm << " >= " << number(v.lower) << '\n';
    } else if (lo_inf) {
      out << " -inf <= " << nm << " <= " << number(v.upper) << '\n';
    } else {
      out << ' ' << number(v.lower) << " <= " << nm << " <= " << number(v.upper) << '\n';
    }
  }

  if (problem.num_binaries() > 0) {
    out << "Binaries\n";
    for (std::size_t j = 0; j < problem.num_variables(); ++j)
      if (problem.variables()[j].kind == VarKind::binary) out << ' ' << vnames[j] << '\n';
  }
  out << "End\n";
  return out.str();
}

void export_lp(const MilpProblem& problem, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  file << to_lp_string(problem);
  if (!file) fail(ErrorCode::io, "failed writing '" + path.string() + "'");
}

}  // namespace tsagg::solve
