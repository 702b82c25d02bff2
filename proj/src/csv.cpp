#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "monoband/errors.hpp"
#include "monoband/io.hpp"

namespace monoband::io {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim whitespace and a possible trailing CR
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "na" || cell == "NaN" || cell == "nan";
}

void interpolate_column(std::vector<double>& col, const std::string& name) {
    const int n = static_cast<int>(col.size());
    int first_valid = -1;
    for (int i = 0; i < n; ++i)
        if (std::isfinite(col[i])) {
            first_valid = i;
            break;
        }
    if (first_valid < 0)
        throw MissingData("column '" + name + "' has no observed values");
    for (int i = 0; i < first_valid; ++i) col[i] = col[first_valid];
    int last = first_valid;
    for (int i = first_valid + 1; i < n; ++i) {
        if (!std::isfinite(col[i])) continue;
        for (int j = last + 1; j < i; ++j) {
            const double frac = static_cast<double>(j - last) / (i - last);
            col[j] = col[last] + frac * (col[i] - col[last]);
        }
        last = i;
    }
    for (int i = last + 1; i < n; ++i) col[i] = col[last];
}

}  // namespace

TimeSeriesPanel ingest_csv(const std::string& path, bool regression_mode,
                           bool interpolate_missing, bool add_intercept) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("input file is empty: " + path);
    std::vector<std::string> header = split_row(line);
    if (header.empty()) throw ParseError("header row is empty");

    const bool skip_time = header[0] == "t";
    std::vector<std::string> names(header.begin() + (skip_time ? 1 : 0), header.end());
    if (names.empty()) throw ParseError("no data columns after the time column");

    std::vector<std::vector<double>> cols(names.size());
    int row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> cells = split_row(line);
        if (cells.size() != header.size())
            throw ParseError("row " + std::to_string(row_number) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(header.size()));
        for (std::size_t c = 0; c < names.size(); ++c) {
            const std::string& cell = cells[c + (skip_time ? 1 : 0)];
            if (is_missing(cell)) {
                if (!interpolate_missing)
                    throw MissingData("missing value at row " + std::to_string(row_number) +
                                      ", column '" + names[c] + "'");
                cols[c].push_back(std::nan(""));
                continue;
            }
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
                cols[c].push_back(v);
            } catch (const std::exception&) {
                throw ParseError("non-numeric cell at row " + std::to_string(row_number) +
                                 ", column '" + names[c] + "'");
            }
        }
    }
    const int n = cols.empty() ? 0 : static_cast<int>(cols[0].size());
    if (n < 30) throw TooShort("need at least 30 rows, found " + std::to_string(n));
    for (std::size_t c = 0; c < cols.size(); ++c)
        if (interpolate_missing) interpolate_column(cols[c], names[c]);

    TimeSeriesPanel panel;
    panel.n = n;
    if (!regression_mode) {
        panel.p = static_cast<int>(cols.size());
        panel.y.resize(static_cast<std::size_t>(n) * panel.p);
        for (int k = 0; k < panel.p; ++k)
            std::copy(cols[k].begin(), cols[k].end(), panel.col(k));
    } else {
        int ycol = -1;
        for (std::size_t c = 0; c < names.size(); ++c)
            if (names[c] == "y") ycol = static_cast<int>(c);
        if (ycol < 0) throw ParseError("regression mode needs a column named 'y'");
        panel.p = 1;
        panel.y.assign(cols[ycol].begin(), cols[ycol].end());
        std::vector<int> xcols;
        for (std::size_t c = 0; c < names.size(); ++c)
            if (static_cast<int>(c) != ycol) xcols.push_back(static_cast<int>(c));
        panel.px = static_cast<int>(xcols.size()) + (add_intercept ? 1 : 0);
        if (panel.px == 0) throw ParseError("regression mode needs covariate columns");
        panel.x.resize(static_cast<std::size_t>(n) * panel.px);
        int out = 0;
        if (add_intercept) {
            std::fill_n(panel.x.begin(), n, 1.0);
            out = 1;
        }
        for (int c : xcols) {
            std::copy(cols[c].begin(), cols[c].end(),
                      panel.x.begin() + static_cast<std::size_t>(out) * n);
            ++out;
        }
    }
    panel.validate();
    return panel;
}

void write_bands_csv(const std::string& path, const ScbResult& scb) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << "alpha,coordinate,t,estimate,lower,upper\n";
    char buf[160];
    for (double a : scb.alpha)
        for (int k = 0; k < scb.K; ++k)
            for (int g = 0; g < scb.G; ++g) {
                std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%.17g,%.17g,%.17g\n", a, k,
                              scb.eval_grid[g], scb.estimate_at(g, k), scb.lower(g, k, a),
                              scb.upper(g, k, a));
                out << buf;
            }
}

std::vector<BandRow> read_bands_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open bands file: " + path);
    std::string line;
    std::getline(in, line);
    std::vector<BandRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_row(line);
        if (cells.size() != 6) throw ParseError("bad bands row: " + line);
        rows.push_back(BandRow{std::stod(cells[0]), std::stoi(cells[1]), std::stod(cells[2]),
                               std::stod(cells[3]), std::stod(cells[4]), std::stod(cells[5])});
    }
    return rows;
}

double lag12_autocorrelation(const TimeSeriesPanel& panel) {
    double worst = 0.0;
    const int lag = 12;
    if (panel.n <= lag + 2) return 0.0;
    for (int k = 0; k < panel.p; ++k) {
        const double* y = panel.col(k);
        double mean = 0.0;
        for (int i = 0; i < panel.n; ++i) mean += y[i];
        mean /= panel.n;
        double num = 0.0, den = 0.0;
        for (int i = 0; i < panel.n; ++i) {
            den += (y[i] - mean) * (y[i] - mean);
            if (i + lag < panel.n) num += (y[i] - mean) * (y[i + lag] - mean);
        }
        if (den > 0.0) worst = std::max(worst, std::fabs(num / den));
    }
    return worst;
}

}  // namespace monoband::io
