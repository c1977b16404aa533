#include "scorecast/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scorecast/checkpoint.hpp"
#include "scorecast/csv.hpp"
#include "scorecast/detection.hpp"
#include "scorecast/errors.hpp"
#include "scorecast/rng.hpp"
#include "scorecast/score_forecast.hpp"

namespace scorecast {

namespace {

namespace fs = std::filesystem;

std::string hex64(std::uint64_t value) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::uint64_t file_checksum(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("manifest: cannot checksum '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();
    return fnv1a64(std::string_view(bytes.data(), bytes.size()));
}

class StageClock {
public:
    explicit StageClock(std::vector<std::pair<std::string, double>>& sink) : sink_(sink) {}

    template <typename Fn>
    auto time(const std::string& stage, Fn&& fn) -> decltype(fn()) {
        current_ = stage;
        const auto begin = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record(begin, stage);
        } else {
            auto result = fn();
            record(begin, stage);
            return result;
        }
    }

    const std::string& current_stage() const { return current_; }

private:
    void record(std::chrono::steady_clock::time_point begin, const std::string& stage) {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - begin;
        sink_.emplace_back(stage, elapsed.count());
    }

    std::vector<std::pair<std::string, double>>& sink_;
    std::string current_;
};

// The manifest is rewritten at completion; a run that dies mid-way leaves
// this marker behind so partial artifacts are recognizably stale.
void write_stale_marker(const fs::path& dir, const std::string& status) {
    std::ofstream out(dir / "manifest.txt");
    out << "scorecast experiment manifest\n";
    out << "status " << status << "\n";
}

}  // namespace

GeneratedDataset build_dataset(const ExperimentConfig& config, std::uint64_t master_seed,
                               Eigen::Index* dropped_rows) {
    if (dropped_rows != nullptr) {
        *dropped_rows = 0;
    }
    TimeSeries clean = [&]() -> TimeSeries {
        const DatasetSpec& spec = config.dataset;
        if (spec.kind == "sine") {
            return gen_sine(spec.length, spec.scale);
        }
        if (spec.kind == "sincos") {
            return gen_sincos(spec.length);
        }
        LoadedCsv loaded = load_csv_columns(spec.path, spec.columns, spec.offset, spec.limit);
        if (dropped_rows != nullptr) {
            *dropped_rows = loaded.dropped_rows;
        }
        return loaded.series;
    }();

    const std::uint64_t datagen_seed = Rng::derive_seed(master_seed, "datagen");
    const InjectionSpec& inj = config.injection;
    if (inj.mode == "periodic") {
        return inject_periodic(clean, inj.period, inj.noise, datagen_seed);
    }
    if (inj.mode == "delayed-pair") {
        Eigen::Index count = inj.count;
        if (count == 0) {
            count = static_cast<Eigen::Index>(
                std::llround(inj.rate * static_cast<double>(clean.length())));
        }
        if (inj.source_dim > clean.dim() || inj.target_dim > clean.dim()) {
            throw DataError("injection: source/target dimension exceeds the series dimension");
        }
        return inject_delayed_pair(clean, count, inj.lag, inj.source_dim - 1, inj.target_dim - 1,
                                   inj.noise, datagen_seed);
    }
    LabelSet empty(clean.dim());
    TimeSeries series = clean;
    return GeneratedDataset{std::move(series), std::move(clean), std::move(empty), datagen_seed};
}

ExperimentReport run_experiment(const ExperimentConfig& config, std::uint64_t master_seed,
                                const std::string& out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir / "models");

    ExperimentReport report;
    report.master_seed = master_seed;
    report.config_hash = config.hash();
    report.out_dir = out_dir;
    report.protocol = config.evaluation.protocol;

    StageClock clock(report.timings);
    write_stale_marker(dir, "running");

    try {
        // ---- Dataset ----------------------------------------------------
        GeneratedDataset dataset = clock.time("dataset", [&] {
            return build_dataset(config, master_seed, &report.dropped_rows);
        });
        const TimeSeries& series = dataset.series;
        dataset.labels.validate_range(series.start_index(), series.end_index());
        write_series_csv((dir / "series.csv").string(), series);
        write_labels_csv((dir / "labels.csv").string(), dataset.labels);

        // ---- Split & normalize ------------------------------------------
        if (config.cuts.size() > 2) {
            throw DataError("split: at most two cut points (three segments) are supported");
        }
        std::vector<TimeSeries> raw_segments = split_series(series, config.cuts);
        const NormStats stats = compute_norm_stats(raw_segments.front());
        const TimeSeries normalized = apply_normalization(series, stats);
        std::vector<TimeSeries> segments = split_series(normalized, config.cuts);
        const bool three_way = segments.size() == 3;
        for (const TimeSeries& segment : segments) {
            report.segment_lengths.push_back(segment.length());
        }
        const TimeSeries& seg_a = segments[0];
        const TimeSeries& seg_b = segments[1];

        // ---- Layer 1: detector ------------------------------------------
        TrainConfig g_train = config.detector.train;
        g_train.seed = Rng::derive_seed(master_seed, "detector");
        TrainResult g = clock.time("train-detector", [&] {
            return train_forecaster(config.detector.model, seg_a, Window(config.detector.window),
                                    g_train);
        });
        report.detector_mse = g.final_mse;
        save_checkpoint((dir / "models" / "detector.ckpt").string(), *g.model, &stats);

        const int gw = config.detector.window;
        ScoreSeries scores_b = clock.time("score", [&] {
            return score_segment(*g.model, seg_b, seg_a.tail(gw));
        });

        // ---- Layer 2: score model ----------------------------------------
        const TimeSeries score_series(scores_b.start_index(), scores_b.values());
        TrainConfig f_train = config.scorecaster.train;
        f_train.seed = Rng::derive_seed(master_seed, "scorecaster");
        TrainResult f = clock.time("train-scorecaster", [&] {
            return train_scaled_forecaster(config.scorecaster.model, score_series,
                                           Window(config.scorecaster.window), f_train);
        });
        report.scorecaster_mse = f.final_mse;
        save_checkpoint((dir / "models" / "scorecaster.ckpt").string(), *f.model);

        // ---- Forecast & evaluate -----------------------------------------
        Eigen::Index horizon = config.evaluation.horizon;
        if (horizon == 0) {
            if (!three_way) {
                throw DataError(
                    "evaluation: a two-segment run forecasts past the data and needs an "
                    "explicit horizon");
            }
            horizon = segments[2].length();
        }

        const ForecastRun run = clock.time("forecast", [&] {
            return forecast(*f.model, scores_b, static_cast<int>(horizon));
        });
        write_forecast_csv((dir / "scores_forecast.csv").string(),
                           scores_b.concat(run.forecasts));

        if (config.evaluation.protocol == "window") {
            write_scores_csv((dir / "scores_observed.csv").string(), scores_b);
            report.window_report = clock.time("evaluate", [&] {
                return evaluate_window(run.forecasts, dataset.labels);
            });
            write_auc_csv((dir / "auc.csv").string(), report.window_report);
        } else {
            if (!three_way) {
                throw DataError("evaluation: the sweep protocol needs three segments");
            }
            // At sweep anchor tau everything up to tau has been observed, so
            // the test segment's own layer-1 scores join the observed pool.
            const TimeSeries& seg_c = segments[2];
            ScoreSeries scores_c = clock.time("score-test", [&] {
                return score_segment(*g.model, seg_c, seg_b.tail(gw));
            });
            const ScoreSeries observed = scores_b.concat(scores_c);
            write_scores_csv((dir / "scores_observed.csv").string(), observed);
            report.sweep = clock.time("evaluate", [&] {
                return horizon_sweep(*f.model, observed, dataset.labels, seg_c.start_index(),
                                     seg_c.end_index(), config.evaluation.max_horizon);
            });
            write_auc_csv((dir / "auc.csv").string(), report.sweep);
        }

        // ---- Manifest -----------------------------------------------------
        std::ofstream manifest(dir / "manifest.txt");
        manifest << "scorecast experiment manifest\n";
        manifest << "status complete\n";
        manifest << "config_hash " << hex64(report.config_hash) << "\n";
        manifest << "master_seed " << master_seed << "\n";
        manifest << "seed datagen " << Rng::derive_seed(master_seed, "datagen") << "\n";
        manifest << "seed detector " << Rng::derive_seed(master_seed, "detector") << "\n";
        manifest << "seed scorecaster " << Rng::derive_seed(master_seed, "scorecaster") << "\n";
        manifest << "series length " << series.length() << " dim " << series.dim()
                 << " start " << series.start_index() << "\n";
        if (report.dropped_rows > 0) {
            manifest << "dropped_rows " << report.dropped_rows << "\n";
        }
        manifest << "segments";
        for (const auto len : report.segment_lengths) {
            manifest << " " << len;
        }
        manifest << "\n";
        manifest << "detector kind " << config.detector.model.kind << " window "
                 << config.detector.window << " final_mse " << format_double(report.detector_mse)
                 << "\n";
        manifest << "scorecaster kind " << config.scorecaster.model.kind << " window "
                 << config.scorecaster.window << " final_mse "
                 << format_double(report.scorecaster_mse) << "\n";
        manifest << "protocol " << report.protocol << "\n";
        for (const char* name :
             {"series.csv", "labels.csv", "scores_observed.csv", "scores_forecast.csv",
              "auc.csv", "models/detector.ckpt", "models/scorecaster.ckpt"}) {
            manifest << "artifact " << name << " fnv1a " << hex64(file_checksum(dir / name))
                     << "\n";
        }
        // Wall-clock only; never part of determinism comparisons.
        for (const auto& timing : report.timings) {
            manifest << "timing " << timing.first << " "
                     << format_double(timing.second) << "\n";
        }
    } catch (const std::exception& e) {
        // Flag partial artifacts as stale, then re-raise with the stage name
        // (preserving the exception type, which drives the CLI exit code).
        const std::string cause = "stage " + clock.current_stage() + ": " + e.what();
        write_stale_marker(dir, "failed at " + cause);
        if (dynamic_cast<const NumericalError*>(&e) != nullptr) {
            throw NumericalError(cause);
        }
        if (dynamic_cast<const UsageError*>(&e) != nullptr) {
            throw UsageError(cause);
        }
        if (dynamic_cast<const DataError*>(&e) != nullptr) {
            throw DataError(cause);
        }
        throw;
    }
    return report;
}

}  // namespace scorecast
