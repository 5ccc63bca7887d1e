#include "csv_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "error.hpp"

namespace tsagg {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool looks_iso_date(const std::string& s) {
  return s.size() >= 10 && std::isdigit(static_cast<unsigned char>(s[0])) && s[4] == '-' &&
         s[7] == '-';
}

void split_header(const std::string& field, std::string& name, std::string& unit) {
  const auto open = field.rfind('[');
  if (open != std::string::npos && !field.empty() && field.back() == ']') {
    name = trim(field.substr(0, open));
    unit = trim(field.substr(open + 1, field.size() - open - 2));
  } else {
    name = field;
    unit.clear();
  }
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& text, double& value) {
  const char* b = text.data();
  const char* e = b + text.size();
  if (b != e && *b == '+') ++b;
  const auto res = std::from_chars(b, e, value);
  return res.ec == std::errc() && res.ptr == e && std::isfinite(value);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int p = 6; p < 17; ++p) {
    char shorter[40];
    std::snprintf(shorter, sizeof(shorter), "%.*g", p, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

RawSeriesSet read_series_csv(std::istream& in, double step_length_hours,
                             const std::string& source) {
  std::string line;
  int line_no = 0;
  auto where = [&]() { return source + ":" + std::to_string(line_no) + ": "; };
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) fail(ErrorCode::data, source + ": empty file");
  if (!header.empty() && header[0].size() >= 3 && header[0].compare(0, 3, "\xEF\xBB\xBF") == 0)
    header[0] = header[0].substr(3);

  static const char* kTimeNames[] = {"time", "timestamp", "date", "datetime"};
  bool has_time = std::any_of(std::begin(kTimeNames), std::end(kTimeNames),
                              [&](const char* n) { return lower(header[0]) == n; });

  RawSeriesSet set;
  set.step_length_hours = step_length_hours;
  bool decided = has_time;
  const int header_line = line_no;
  std::string prev_stamp;
  std::vector<std::vector<double>> columns;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (!decided) {
      double probe;
      has_time = !parse_double(fields[0], probe);
      decided = true;
    }
    if (columns.empty()) {
      const std::size_t first = has_time ? 1 : 0;
      if (header.size() <= first) fail(ErrorCode::data, source + ":" + std::to_string(header_line) + ": no attribute columns");
      for (std::size_t c = first; c < header.size(); ++c) {
        Attribute a;
        split_header(header[c], a.name, a.unit);
        if (a.name.empty())
          fail(ErrorCode::data,
               source + ":" + std::to_string(header_line) + ": column " + std::to_string(c + 1) + " has no name");
        set.attributes.push_back(std::move(a));
      }
      columns.resize(set.attributes.size());
    }
    if (fields.size() != header.size())
      fail(ErrorCode::data, where() + "expected " + std::to_string(header.size()) + " fields, found " +
                                std::to_string(fields.size()));
    const std::size_t first = has_time ? 1 : 0;
    if (has_time) {
      const std::string& stamp = fields[0];
      double a, b;
      if (!prev_stamp.empty()) {
        bool ordered = true;
        if (parse_double(prev_stamp, a) && parse_double(stamp, b)) ordered = b > a;
        else if (looks_iso_date(prev_stamp) && looks_iso_date(stamp)) ordered = stamp > prev_stamp;
        if (!ordered) fail(ErrorCode::data, where() + "timestamp '" + stamp + "' is not after '" + prev_stamp + "'");
      }
      prev_stamp = stamp;
    }
    for (std::size_t c = first; c < fields.size(); ++c) {
      double v;
      if (!parse_double(fields[c], v))
        fail(ErrorCode::data, where() + "column '" + header[c] + "': '" + fields[c] + "' is not a finite number");
      columns[c - first].push_back(v);
    }
  }
  if (columns.empty()) fail(ErrorCode::data, source + ": no data rows");
  for (std::size_t a = 0; a < columns.size(); ++a) set.attributes[a].values = std::move(columns[a]);
  set.validate();
  return set;
}

RawSeriesSet read_series_csv(const std::filesystem::path& path, double step_length_hours) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "'");
  return read_series_csv(in, step_length_hours, path.string());
}

void write_series_csv(std::ostream& out, const RawSeriesSet& series) {
  for (std::size_t a = 0; a < series.attributes.size(); ++a) {
    const auto& at = series.attributes[a];
    out << (a ? "," : "") << at.name;
    if (!at.unit.empty()) out << " [" << at.unit << ']';
  }
  out << '\n';
  for (std::size_t t = 0; t < series.steps(); ++t) {
    for (std::size_t a = 0; a < series.attributes.size(); ++a)
      out << (a ? "," : "") << format_double(series.attributes[a].values[t]);
    out << '\n';
  }
}

void write_series_csv(const std::filesystem::path& path, const RawSeriesSet& series) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  write_series_csv(out, series);
  if (!out) fail(ErrorCode::io, "failed writing '" + path.string() + "'");
}

}  // namespace tsagg
