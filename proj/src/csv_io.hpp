#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "timeseries.hpp"

namespace tsagg {

// Comma-separated series with a header row "name [unit],...". A first
// column named time/timestamp/date/datetime, or one whose first value is not
// numeric, is treated as a timestamp and only checked for ordering.
RawSeriesSet read_series_csv(std::istream& in, double step_length_hours,
                             const std::string& source = "<input>");
RawSeriesSet read_series_csv(const std::filesystem::path& path, double step_length_hours);

void write_series_csv(std::ostream& out, const RawSeriesSet& series);
void write_series_csv(const std::filesystem::path& path, const RawSeriesSet& series);

// Splits one CSV line on commas, trimming blanks and optional double quotes.
std::vector<std::string> split_csv_line(const std::string& line);

// Parses a whole field as a finite double.
bool parse_double(const std::string& text, double& value);

std::string format_double(double v);

}  // namespace tsagg
