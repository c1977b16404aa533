#include "scorecast/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "scorecast/errors.hpp"

namespace scorecast {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot open '" + path + "' for writing");
    }
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    return in;
}

// Reads all data lines of a CSV, validates the header, and returns the
// split fields of every row.
std::vector<std::vector<std::string>> read_rows(std::istream& in, const std::string& path,
                                                const std::string& expected_header_prefix) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("'" + path + "' is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line.rfind(expected_header_prefix, 0) != 0) {
        throw DataError("'" + path + "': expected header starting with '" +
                        expected_header_prefix + "', found '" + line + "'");
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        rows.push_back(split_csv(line));
    }
    return rows;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

double parse_double(const std::string& token, const std::string& context) {
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size()) {
        throw DataError(context + ": not a number: '" + token + "'");
    }
    return value;
}

std::int64_t parse_int(const std::string& token, const std::string& context) {
    char* end = nullptr;
    const long long value = std::strtoll(token.c_str(), &end, 10);
    if (token.empty() || end != token.c_str() + token.size()) {
        throw DataError(context + ": not an integer: '" + token + "'");
    }
    return value;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t begin = 0;
    while (true) {
        const std::size_t comma = line.find(',', begin);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(begin));
            return fields;
        }
        fields.push_back(line.substr(begin, comma - begin));
        begin = comma + 1;
    }
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
    auto out = open_out(path);
    out << "t";
    for (Eigen::Index j = 0; j < series.dim(); ++j) {
        out << ",x" << (j + 1);
    }
    out << "\n";
    for (Eigen::Index i = 0; i < series.length(); ++i) {
        out << (series.start_index() + i);
        for (Eigen::Index j = 0; j < series.dim(); ++j) {
            out << "," << format_double(series.values()(i, j));
        }
        out << "\n";
    }
}

TimeSeries read_series_csv(const std::string& path) {
    auto in = open_in(path);
    const auto rows = read_rows(in, path, "t,");
    if (rows.empty()) {
        throw DataError("'" + path + "' has no data rows");
    }
    const auto dim = static_cast<Eigen::Index>(rows.front().size()) - 1;
    if (dim < 1) {
        throw DataError("'" + path + "': rows need a time and at least one value");
    }
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), dim);
    TimeIndex start = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (static_cast<Eigen::Index>(row.size()) != dim + 1) {
            throw DataError("'" + path + "': row " + std::to_string(i + 2) +
                            " has the wrong number of fields");
        }
        const TimeIndex t = parse_int(row[0], path);
        if (i == 0) {
            start = t;
        } else if (t != start + static_cast<TimeIndex>(i)) {
            throw DataError("'" + path + "': time indices must be contiguous, broken at t=" +
                            std::to_string(t));
        }
        for (Eigen::Index j = 0; j < dim; ++j) {
            values(static_cast<Eigen::Index>(i), j) =
                parse_double(row[static_cast<std::size_t>(j + 1)], path);
        }
    }
    return TimeSeries(start, std::move(values));
}

void write_labels_csv(const std::string& path, const LabelSet& labels) {
    auto out = open_out(path);
    out << "dim,t\n";
    for (Eigen::Index j = 0; j < labels.dim(); ++j) {
        for (const TimeIndex t : labels.indices(j)) {
            out << (j + 1) << "," << t << "\n";
        }
    }
}

LabelSet read_labels_csv(const std::string& path, Eigen::Index min_dim) {
    auto in = open_in(path);
    const auto rows = read_rows(in, path, "dim,t");
    Eigen::Index dim = min_dim;
    std::vector<std::pair<Eigen::Index, TimeIndex>> entries;
    entries.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() != 2) {
            throw DataError("'" + path + "': row " + std::to_string(i + 2) +
                            " must be 'dim,t'");
        }
        const auto d = static_cast<Eigen::Index>(parse_int(row[0], path));
        if (d < 1) {
            throw DataError("'" + path + "': dimensions are 1-based, got " + std::to_string(d));
        }
        entries.emplace_back(d - 1, parse_int(row[1], path));
        dim = std::max(dim, d);
    }
    if (dim < 1) {
        throw DataError("'" + path + "': no labels and no dimension hint");
    }
    return LabelSet(dim, entries);
}

void write_scores_csv(const std::string& path, const ScoreSeries& scores) {
    auto out = open_out(path);
    out << "t";
    for (Eigen::Index j = 0; j < scores.dim(); ++j) {
        out << ",a" << (j + 1);
    }
    out << "\n";
    for (Eigen::Index i = 0; i < scores.length(); ++i) {
        out << (scores.start_index() + i);
        for (Eigen::Index j = 0; j < scores.dim(); ++j) {
            out << "," << format_double(scores.values()(i, j));
        }
        out << "\n";
    }
}

ScoreSeries read_scores_csv(const std::string& path) {
    // Same layout as a series file, but interpreted as observed scores.
    const TimeSeries raw = read_series_csv(path);
    return ScoreSeries(raw.start_index(), raw.values(), Provenance::ObservedResidual);
}

void write_forecast_csv(const std::string& path, const ScoreSeries& scores) {
    auto out = open_out(path);
    out << "t,provenance";
    for (Eigen::Index j = 0; j < scores.dim(); ++j) {
        out << ",a" << (j + 1);
    }
    out << "\n";
    for (Eigen::Index i = 0; i < scores.length(); ++i) {
        const bool observed =
            scores.provenance()[static_cast<std::size_t>(i)] == Provenance::ObservedResidual;
        out << (scores.start_index() + i) << "," << (observed ? "obs" : "pred");
        for (Eigen::Index j = 0; j < scores.dim(); ++j) {
            out << "," << format_double(scores.values()(i, j));
        }
        out << "\n";
    }
}

ScoreSeries read_forecast_csv(const std::string& path) {
    auto in = open_in(path);
    const auto rows = read_rows(in, path, "t,provenance");
    if (rows.empty()) {
        throw DataError("'" + path + "' has no data rows");
    }
    const auto dim = static_cast<Eigen::Index>(rows.front().size()) - 2;
    if (dim < 1) {
        throw DataError("'" + path + "': rows need time, provenance, and at least one value");
    }
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), dim);
    std::vector<Provenance> provenance(rows.size());
    TimeIndex start = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (static_cast<Eigen::Index>(row.size()) != dim + 2) {
            throw DataError("'" + path + "': row " + std::to_string(i + 2) +
                            " has the wrong number of fields");
        }
        const TimeIndex t = parse_int(row[0], path);
        if (i == 0) {
            start = t;
        } else if (t != start + static_cast<TimeIndex>(i)) {
            throw DataError("'" + path + "': time indices must be contiguous, broken at t=" +
                            std::to_string(t));
        }
        if (row[1] == "obs") {
            provenance[i] = Provenance::ObservedResidual;
        } else if (row[1] == "pred") {
            provenance[i] = Provenance::ModelForecast;
        } else {
            throw DataError("'" + path + "': provenance must be obs or pred, got '" + row[1] +
                            "'");
        }
        for (Eigen::Index j = 0; j < dim; ++j) {
            values(static_cast<Eigen::Index>(i), j) =
                parse_double(row[static_cast<std::size_t>(j + 2)], path);
        }
    }
    return ScoreSeries(start, std::move(values), std::move(provenance));
}

namespace {

void write_auc_rows(std::ostream& out, Eigen::Index dim, int k,
                    const std::optional<AucCell>& cell) {
    if (!cell) {
        return;
    }
    out << (dim + 1) << "," << k << "," << format_double(cell->auc) << "," << cell->n_pos << ","
        << cell->n_neg << "\n";
}

}  // namespace

void write_auc_csv(const std::string& path, const AucReport& report) {
    auto out = open_out(path);
    out << "dim,k,auc,n_pos,n_neg\n";
    for (std::size_t j = 0; j < report.per_dim.size(); ++j) {
        write_auc_rows(out, static_cast<Eigen::Index>(j), 0, report.per_dim[j]);
    }
}

void write_auc_csv(const std::string& path, const HorizonSweep& sweep) {
    auto out = open_out(path);
    out << "dim,k,auc,n_pos,n_neg\n";
    for (std::size_t j = 0; j < sweep.cells.size(); ++j) {
        for (int k = 1; k <= sweep.max_horizon; ++k) {
            write_auc_rows(out, static_cast<Eigen::Index>(j), k,
                           sweep.cells[j][static_cast<std::size_t>(k - 1)]);
        }
    }
}

std::string render_auc_table(const AucReport& report) {
    std::ostringstream out;
    out << "dim     auc    n_pos  n_neg\n";
    for (std::size_t j = 0; j < report.per_dim.size(); ++j) {
        const auto& cell = report.per_dim[j];
        out << std::left << std::setw(8) << (j + 1);
        if (cell) {
            out << std::setw(7) << std::fixed << std::setprecision(3) << cell->auc
                << std::setw(7) << cell->n_pos << cell->n_neg << "\n";
            out.unsetf(std::ios::fixed);
        } else {
            out << "undefined (needs both classes)\n";
        }
    }
    return out.str();
}

std::string render_auc_table(const HorizonSweep& sweep) {
    std::ostringstream out;
    out << "k:      ";
    for (int k = 1; k <= sweep.max_horizon; ++k) {
        out << std::right << std::setw(6) << k;
    }
    out << "\n";
    for (std::size_t j = 0; j < sweep.cells.size(); ++j) {
        out << "dim " << std::left << std::setw(4) << (j + 1);
        for (int k = 1; k <= sweep.max_horizon; ++k) {
            const auto& cell = sweep.cells[j][static_cast<std::size_t>(k - 1)];
            if (cell) {
                out << std::right << std::setw(6) << std::fixed << std::setprecision(2)
                    << cell->auc;
                out.unsetf(std::ios::fixed);
            } else {
                out << std::right << std::setw(6) << "-";
            }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace scorecast
