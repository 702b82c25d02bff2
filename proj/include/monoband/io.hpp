#pragma once

#include <string>
#include <vector>

#include "monoband/types.hpp"

namespace monoband::io {

// Reads a wide-format CSV with a header row. An optional first column named
// "t" is ignored (the time grid is i/n). In regression mode the file must
// contain a "y" column; every other numeric column becomes a covariate.
// Missing cells (empty or NA) are linearly interpolated along the column when
// `interpolate_missing` is set, otherwise they raise MissingData.
TimeSeriesPanel ingest_csv(const std::string& path, bool regression_mode,
                           bool interpolate_missing, bool add_intercept = true);

// Long-format band table: alpha, coordinate, t, estimate, lower, upper.
void write_bands_csv(const std::string& path, const ScbResult& scb);

struct BandRow {
    double alpha;
    int coordinate;
    double t;
    double estimate;
    double lower;
    double upper;
};
std::vector<BandRow> read_bands_csv(const std::string& path);

// result.json with the documented schema; byte-identical across reruns.
std::string result_json(const std::string& mode, const ScbResult& scb);
void write_result_json(const std::string& path, const std::string& mode, const ScbResult& scb);

// Warns when the series keeps a strong lag-12 autocorrelation (seasonality
// was supposed to be removed upstream). Returns the worst coordinate's value.
double lag12_autocorrelation(const TimeSeriesPanel& panel);

}  // namespace monoband::io
