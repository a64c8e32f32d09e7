#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "regime/data/series.hpp"

namespace regime::data {

// Raised on malformed input files; message carries the offending line.
struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadReport {
    std::size_t rows_read = 0;
    std::size_t gaps_interpolated = 0;   // missing 5-minute steps filled in
    std::size_t segments_dropped = 0;    // contiguous runs discarded at long gaps
    std::size_t rows_dropped = 0;
    std::int64_t retained_start = 0;
    std::int64_t retained_end = 0;
    std::string to_json() const;
};

// Input format: header `timestamp,flow`, ISO-8601 timestamps on a 5-minute
// grid. Gaps of up to 3 missing intervals are linearly interpolated; at
// longer gaps the series is cut and the longest contiguous segment kept.
SeriesBundle load_flow_csv(const std::string& path, LoadReport* report = nullptr);

std::int64_t parse_iso8601(const std::string& text);
std::string format_iso8601(std::int64_t epoch_seconds);

void write_flow_csv(const std::string& path, const SeriesBundle& bundle);

}  // namespace regime::data
