#include "krig/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "krig/error.hpp"

namespace krig {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split_cells(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.emplace_back(trim(line.substr(start)));
      break;
    }
    cells.emplace_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, const std::string& name,
                  std::size_t line_number, std::size_t column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || cell.empty()) {
    throw Error(errc::parse_error,
                name + ", line " + std::to_string(line_number) + ", column " +
                    std::to_string(column + 1) + ": cannot parse '" + cell +
                    "' as a real number");
  }
  if (!std::isfinite(value)) {
    throw Error(errc::parse_error,
                name + ", line " + std::to_string(line_number) + ", column " +
                    std::to_string(column + 1) + ": non-finite value '" +
                    cell + "'");
  }
  return value;
}

}  // namespace

IngestResult ingest_csv_stream(std::istream& in, const std::string& name,
                               std::optional<std::size_t> dimension_hint) {
  IngestResult result;
  std::string line;
  std::size_t line_number = 0;

  if (!std::getline(in, line)) {
    throw Error(errc::parse_error, name + ": empty file, expected a header");
  }
  ++line_number;
  result.header = split_cells(line);
  const std::size_t columns = result.header.size();
  if (columns < 2 || columns > 4) {
    throw Error(errc::parse_error,
                name + ": expected 2 to 4 columns (x[,y[,z]],value), got " +
                    std::to_string(columns));
  }
  const std::size_t d = columns - 1;
  if (dimension_hint && *dimension_hint != d) {
    throw Error(errc::invalid_argument,
                name + ": file has dimension " + std::to_string(d) +
                    " but dimension " + std::to_string(*dimension_hint) +
                    " was requested");
  }

  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_cells(line);
    if (cells.size() != columns) {
      throw Error(errc::parse_error,
                  name + ", line " + std::to_string(line_number) +
                      ": expected " + std::to_string(columns) +
                      " columns, got " + std::to_string(cells.size()));
    }
    Location loc;
    loc.coords.reserve(d);
    for (std::size_t a = 0; a < d; ++a) {
      loc.coords.push_back(parse_cell(cells[a], name, line_number, a));
    }
    result.samples.locations.push_back(std::move(loc));
    result.samples.values.push_back(parse_cell(cells[d], name, line_number, d));
  }

  if (result.samples.locations.empty()) {
    throw Error(errc::parse_error, name + ": no data rows");
  }
  result.samples.validate();

  const auto& locs = result.samples.locations;
  for (std::size_t i = 0; i < locs.size(); ++i) {
    for (std::size_t l = i + 1; l < locs.size(); ++l) {
      if (same_location(locs[i], locs[l])) {
        std::ostringstream msg;
        msg << name << ": rows " << i + 2 << " and " << l + 2
            << " have the same location; the kriging system will be "
            << "singular";
        result.warnings.push_back(msg.str());
      }
    }
  }
  return result;
}

IngestResult ingest_csv(const std::string& path,
                        std::optional<std::size_t> dimension_hint) {
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::io_error, "cannot open data file '" + path + "'");
  }
  return ingest_csv_stream(in, path, dimension_hint);
}

void write_csv(std::ostream& out, const SampleSet& samples) {
  samples.validate();
  static const char* axis_names[] = {"x", "y", "z"};
  const std::size_t d = samples.dim();
  for (std::size_t a = 0; a < d; ++a) {
    out << axis_names[a] << ',';
  }
  out << "value\n";

  char buffer[64];
  const auto emit = [&](double v) {
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    out << buffer;
  };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      emit(samples.locations[i].coords[a]);
      out << ',';
    }
    emit(samples.values[i]);
    out << '\n';
  }
}

}  // namespace krig
