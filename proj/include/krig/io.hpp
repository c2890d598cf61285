#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "krig/kriging.hpp"

namespace krig {

struct IngestResult {
  SampleSet samples;
  std::vector<std::string> header;
  std::vector<std::string> warnings;  // duplicate-location reports
};

// Parses a comma-separated file with a one-line header and columns
// x[,y[,z]],value. Malformed rows are reported with their line number;
// duplicate locations produce warnings (they fail later, at solve time).
IngestResult ingest_csv(const std::string& path,
                        std::optional<std::size_t> dimension_hint = {});

IngestResult ingest_csv_stream(std::istream& in, const std::string& name,
                               std::optional<std::size_t> dimension_hint = {});

// Writes the samples with 17 significant digits, so ingest round-trips
// them exactly.
void write_csv(std::ostream& out, const SampleSet& samples);

}  // namespace krig
