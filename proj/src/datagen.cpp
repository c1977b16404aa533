#include "scorecast/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "scorecast/csv.hpp"
#include "scorecast/errors.hpp"
#include "scorecast/rng.hpp"

namespace scorecast {

namespace {

// Population standard deviation of one column.
double column_std(const Eigen::Ref<const Eigen::VectorXd>& col) {
    const double mean = col.mean();
    return std::sqrt((col.array() - mean).square().mean());
}

// Per-dimension effective (mean, sd) after optional scaling by the clean
// column's own spread.
struct EffectiveNoise {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;
};

EffectiveNoise resolve_noise(const NoiseSpec& noise, const TimeSeries& clean) {
    if (!(noise.sd > 0.0) || !std::isfinite(noise.sd) || !std::isfinite(noise.mean)) {
        throw DataError("injection: noise sd must be positive and parameters finite");
    }
    EffectiveNoise eff;
    eff.mean = Eigen::VectorXd::Constant(clean.dim(), noise.mean);
    eff.sd = Eigen::VectorXd::Constant(clean.dim(), noise.sd);
    if (noise.relative_to_std) {
        for (Eigen::Index j = 0; j < clean.dim(); ++j) {
            const double spread = column_std(clean.values().col(j));
            if (!(spread > 0.0)) {
                throw DataError("injection: relative noise needs a non-constant column " +
                                std::to_string(j + 1));
            }
            eff.mean[j] *= spread;
            eff.sd[j] *= spread;
        }
    }
    return eff;
}

// One perturbation draw. The sign draw (when enabled) precedes the value
// draw, which pins the stream layout for reproducibility.
double draw_perturbation(Rng& rng, const NoiseSpec& noise, double mean, double sd) {
    double m = mean;
    if (noise.random_mean_sign) {
        m = rng.uniform() < 0.5 ? mean : -mean;
    }
    const double value = rng.normal(m, sd);
    if (value == 0.0) {
        throw NumericalError("injection: drew an exactly-zero perturbation");
    }
    return value;
}

}  // namespace

TimeSeries gen_sine(Eigen::Index length, double scale, TimeIndex start) {
    if (length < 1) {
        throw DataError("gen_sine: length must be at least 1");
    }
    if (!(scale != 0.0) || !std::isfinite(scale)) {
        throw DataError("gen_sine: scale must be finite and nonzero");
    }
    Eigen::MatrixXd values(length, 1);
    for (Eigen::Index i = 0; i < length; ++i) {
        values(i, 0) = std::sin(static_cast<double>(start + i) / scale);
    }
    return TimeSeries(start, std::move(values));
}

TimeSeries gen_sincos(Eigen::Index length, TimeIndex start) {
    if (length < 1) {
        throw DataError("gen_sincos: length must be at least 1");
    }
    Eigen::MatrixXd values(length, 2);
    for (Eigen::Index i = 0; i < length; ++i) {
        const double t = static_cast<double>(start + i) / 10.0;
        values(i, 0) = std::sin(t);
        values(i, 1) = std::cos(t);
    }
    return TimeSeries(start, std::move(values));
}

GeneratedDataset inject_periodic(const TimeSeries& clean, int period, const NoiseSpec& noise,
                                 std::uint64_t seed) {
    if (period < 1) {
        throw DataError("inject_periodic: period must be at least 1");
    }
    const EffectiveNoise eff = resolve_noise(noise, clean);
    Rng rng(seed);

    Eigen::MatrixXd values = clean.values();
    LabelSet labels(clean.dim());
    // Injection times are the positive multiples of `period` inside the
    // series' global index range, endpoint included.
    TimeIndex t = ((std::max<TimeIndex>(clean.start_index(), 1) + period - 1) / period) * period;
    for (; t <= clean.end_index(); t += period) {
        const Eigen::Index i = t - clean.start_index();
        for (Eigen::Index j = 0; j < clean.dim(); ++j) {
            values(i, j) += draw_perturbation(rng, noise, eff.mean[j], eff.sd[j]);
            labels.add(j, t);
        }
    }
    return GeneratedDataset{TimeSeries(clean.start_index(), std::move(values)), clean,
                            std::move(labels), seed};
}

GeneratedDataset inject_delayed_pair(const TimeSeries& clean, Eigen::Index count, int lag,
                                     Eigen::Index source_dim, Eigen::Index target_dim,
                                     const NoiseSpec& noise, std::uint64_t seed) {
    if (count < 1) {
        throw DataError("inject_delayed_pair: count must be at least 1");
    }
    if (lag < 0 || lag >= clean.length()) {
        throw DataError("inject_delayed_pair: lag must be in [0, series length)");
    }
    if (source_dim < 0 || source_dim >= clean.dim() || target_dim < 0 ||
        target_dim >= clean.dim()) {
        throw DataError("inject_delayed_pair: dimension out of range");
    }
    const TimeIndex lo = clean.start_index();
    const TimeIndex hi = clean.end_index() - lag;  // tau + lag stays in range
    // With a minimum separation of lag+1, at most this many events fit.
    const TimeIndex capacity = (hi - lo) / (lag + 1) + 1;
    if (count > capacity) {
        throw DataError("inject_delayed_pair: cannot place " + std::to_string(count) +
                        " events with separation " + std::to_string(lag + 1) + "; at most " +
                        std::to_string(capacity) + " fit");
    }
    const EffectiveNoise eff = resolve_noise(noise, clean);
    Rng rng(seed);

    // Uniform draws, rejecting any time within lag of an accepted one so a
    // cause/effect pair never interleaves with another event.
    std::vector<TimeIndex> picks;
    picks.reserve(static_cast<std::size_t>(count));
    std::int64_t attempts = 0;
    const std::int64_t max_attempts = 10000 * static_cast<std::int64_t>(count);
    while (static_cast<Eigen::Index>(picks.size()) < count) {
        if (++attempts > max_attempts) {
            throw DataError("inject_delayed_pair: could not place " + std::to_string(count) +
                            " separated events; reduce the count");
        }
        const TimeIndex tau = rng.uniform_int(lo, hi);
        bool clear = true;
        for (const TimeIndex p : picks) {
            if (std::abs(tau - p) <= lag) {
                clear = false;
                break;
            }
        }
        if (clear) {
            picks.push_back(tau);
        }
    }
    std::sort(picks.begin(), picks.end());

    Eigen::MatrixXd values = clean.values();
    LabelSet labels(clean.dim());
    for (const TimeIndex tau : picks) {
        const Eigen::Index i = tau - clean.start_index();
        values(i, source_dim) +=
            draw_perturbation(rng, noise, eff.mean[source_dim], eff.sd[source_dim]);
        labels.add(source_dim, tau);
        values(i + lag, target_dim) +=
            draw_perturbation(rng, noise, eff.mean[target_dim], eff.sd[target_dim]);
        labels.add(target_dim, tau + lag);
    }
    return GeneratedDataset{TimeSeries(clean.start_index(), std::move(values)), clean,
                            std::move(labels), seed};
}

LoadedCsv load_csv_columns(const std::string& path, const std::vector<std::string>& columns,
                           Eigen::Index offset, Eigen::Index limit) {
    if (columns.empty()) {
        throw DataError("csv load: select at least one column");
    }
    if (offset < 0) {
        throw DataError("csv load: offset must be nonnegative");
    }
    std::ifstream in(path);
    if (!in) {
        throw DataError("csv load: cannot open '" + path + "'");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("csv load: '" + path + "' is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const std::vector<std::string> header = split_csv(line);
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < header.size(); ++i) {
        position[header[i]] = i;
    }
    std::vector<std::size_t> selected;
    for (const auto& name : columns) {
        const auto it = position.find(name);
        if (it == position.end()) {
            throw DataError("csv load: '" + path + "' has no column '" + name + "'");
        }
        selected.push_back(it->second);
    }

    std::vector<std::vector<double>> kept;
    Eigen::Index dropped = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_csv(line);
        std::vector<double> row(selected.size());
        bool missing = false;
        for (std::size_t c = 0; c < selected.size(); ++c) {
            if (selected[c] >= fields.size() || fields[selected[c]].empty() ||
                fields[selected[c]] == "NA") {
                missing = true;
                break;
            }
            row[c] = parse_double(fields[selected[c]],
                                  path + " line " + std::to_string(line_no));
        }
        if (missing) {
            ++dropped;
            continue;
        }
        kept.push_back(std::move(row));
    }

    const auto total = static_cast<Eigen::Index>(kept.size());
    if (offset >= total) {
        throw DataError("csv load: offset " + std::to_string(offset) + " leaves no rows of " +
                        std::to_string(total));
    }
    Eigen::Index take = total - offset;
    if (limit >= 0) {
        if (limit > take) {
            throw DataError("csv load: requested " + std::to_string(limit) + " rows but only " +
                            std::to_string(take) + " remain after offset (" +
                            std::to_string(dropped) + " dropped for missing values)");
        }
        take = limit;
    }

    Eigen::MatrixXd values(take, static_cast<Eigen::Index>(columns.size()));
    for (Eigen::Index i = 0; i < take; ++i) {
        const auto& row = kept[static_cast<std::size_t>(offset + i)];
        for (std::size_t c = 0; c < row.size(); ++c) {
            values(i, static_cast<Eigen::Index>(c)) = row[c];
        }
    }
    return LoadedCsv{TimeSeries(1, std::move(values)), dropped};
}

}  // namespace scorecast
