#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#include "scorecast/checkpoint.hpp"
#include "scorecast/config.hpp"
#include "scorecast/csv.hpp"
#include "scorecast/detection.hpp"
#include "scorecast/errors.hpp"
#include "scorecast/pipeline.hpp"
#include "scorecast/rng.hpp"
#include "scorecast/score_forecast.hpp"
#include "scorecast/training.hpp"

namespace {

using namespace scorecast;

// Output paths default under $SCORECAST_OUT (falling back to the working
// directory); every path remains overridable by flag.
std::string default_out(const std::string& name) {
    const char* root = std::getenv("SCORECAST_OUT");
    if (root == nullptr || *root == '\0') {
        return name;
    }
    return std::string(root) + "/" + name;
}

// Normalizes a raw series with the stats a detector was trained with (a
// checkpoint without stats was trained on raw values).
TimeSeries maybe_normalize(const TimeSeries& series, const Checkpoint& ckpt) {
    if (!ckpt.norm) {
        return series;
    }
    if (ckpt.norm->dim() != series.dim()) {
        throw DataError("checkpoint normalization covers " + std::to_string(ckpt.norm->dim()) +
                        " dimensions, series has " + std::to_string(series.dim()));
    }
    return apply_normalization(series, *ckpt.norm);
}

void cmd_generate(const std::string& config_path, std::uint64_t seed, const std::string& out) {
    const ExperimentConfig config = ExperimentConfig::from_file(config_path);
    Eigen::Index dropped = 0;
    const GeneratedDataset dataset = build_dataset(config, seed, &dropped);
    std::filesystem::create_directories(out);
    write_series_csv(out + "/series.csv", dataset.series);
    write_labels_csv(out + "/labels.csv", dataset.labels);
    std::cout << "wrote " << out << "/series.csv (" << dataset.series.length() << " points, "
              << dataset.series.dim() << " dims) and labels.csv (" << dataset.labels.total()
              << " labels)";
    if (dropped > 0) {
        std::cout << "; dropped " << dropped << " rows with missing values";
    }
    std::cout << "\n";
}

void cmd_train_detector(const std::string& config_path, std::uint64_t seed,
                        const std::string& series_path, const std::string& out) {
    const ExperimentConfig config = ExperimentConfig::from_file(config_path);
    const TimeSeries series = read_series_csv(series_path);
    const std::vector<TimeSeries> raw_segments = split_series(series, config.cuts);
    const NormStats stats = compute_norm_stats(raw_segments.front());
    const TimeSeries train_segment = apply_normalization(raw_segments.front(), stats);

    TrainConfig train = config.detector.train;
    train.seed = Rng::derive_seed(seed, "detector");
    const TrainResult result = train_forecaster(config.detector.model, train_segment,
                                                Window(config.detector.window), train);
    save_checkpoint(out, *result.model, &stats);
    std::cout << "trained " << config.detector.model.kind << " detector on "
              << train_segment.length() << " points; one-step train MSE "
              << format_double(result.final_mse) << "\nwrote " << out << "\n";
}

void cmd_score(const std::string& model_path, const std::string& series_path,
               const std::string& out) {
    const Checkpoint ckpt = load_checkpoint(model_path);
    const TimeSeries series = maybe_normalize(read_series_csv(series_path), ckpt);
    const int w = ckpt.model->window();
    if (series.length() <= w) {
        throw DataError("series is too short to score: needs more than " + std::to_string(w) +
                        " points");
    }
    // The first w points are context; everything after gets a score.
    const TimeSeries segment =
        series.slice(series.start_index() + w, series.end_index());
    const ScoreSeries scores =
        score_segment(*ckpt.model, segment, series.values().topRows(w));
    write_scores_csv(out, scores);
    std::cout << "scored " << scores.length() << " points starting at t="
              << scores.start_index() << "\nwrote " << out << "\n";
}

void cmd_train_scorecaster(const std::string& config_path, std::uint64_t seed,
                           const std::string& scores_path, const std::string& out) {
    const ExperimentConfig config = ExperimentConfig::from_file(config_path);
    const ScoreSeries scores = read_scores_csv(scores_path);
    const TimeSeries score_series(scores.start_index(), scores.values());

    TrainConfig train = config.scorecaster.train;
    train.seed = Rng::derive_seed(seed, "scorecaster");
    const TrainResult result = train_scaled_forecaster(
        config.scorecaster.model, score_series, Window(config.scorecaster.window), train);
    save_checkpoint(out, *result.model);
    std::cout << "trained " << config.scorecaster.model.kind << " score model on "
              << scores.length() << " scores; one-step train MSE "
              << format_double(result.final_mse) << "\nwrote " << out << "\n";
}

void cmd_forecast(const std::string& model_path, const std::string& scores_path, int horizon,
                  const std::string& out) {
    const Checkpoint ckpt = load_checkpoint(model_path);
    const ScoreSeries observed = read_scores_csv(scores_path);
    const ForecastRun run = forecast(*ckpt.model, observed, horizon);
    write_forecast_csv(out, observed.concat(run.forecasts));
    std::cout << "forecast " << horizon << " steps from t=" << run.anchor_index << "\nwrote "
              << out << "\n";
}

// Evaluation accepts either a forecast file (t,provenance,...), where the
// trailing predicted block is evaluated, or a plain score file, where every
// row is.
ScoreSeries read_scores_for_evaluation(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) {
        throw DataError("cannot open '" + path + "'");
    }
    std::string header;
    std::getline(probe, header);
    probe.close();
    if (header.rfind("t,provenance", 0) != 0) {
        return read_scores_csv(path);
    }
    const ScoreSeries all = read_forecast_csv(path);
    Eigen::Index first_pred = all.length();
    for (Eigen::Index i = 0; i < all.length(); ++i) {
        if (all.provenance()[static_cast<std::size_t>(i)] == Provenance::ModelForecast) {
            first_pred = i;
            break;
        }
    }
    if (first_pred == all.length()) {
        return all;  // no predicted rows; evaluate everything
    }
    for (Eigen::Index i = first_pred; i < all.length(); ++i) {
        if (all.provenance()[static_cast<std::size_t>(i)] != Provenance::ModelForecast) {
            throw DataError("'" + path + "': predicted rows must form one trailing block");
        }
    }
    return all.slice(all.start_index() + first_pred, all.end_index());
}

void cmd_evaluate(const std::string& scores_path, const std::string& labels_path,
                  const std::string& out) {
    const ScoreSeries scores = read_scores_for_evaluation(scores_path);
    const LabelSet labels = read_labels_csv(labels_path, scores.dim());
    if (labels.dim() > scores.dim()) {
        throw DataError("labels cover dimension " + std::to_string(labels.dim()) +
                        " but scores only have " + std::to_string(scores.dim()));
    }
    const AucReport report = evaluate_window(scores, labels);
    std::cout << "evaluated " << scores.length() << " scores from t=" << scores.start_index()
              << "\n"
              << render_auc_table(report);
    if (!out.empty()) {
        write_auc_csv(out, report);
        std::cout << "wrote " << out << "\n";
    }
}

void cmd_sweep(const std::string& model_path, const std::string& scores_path,
               const std::string& labels_path, TimeIndex from, TimeIndex to, int max_horizon,
               const std::string& out) {
    const Checkpoint ckpt = load_checkpoint(model_path);
    const ScoreSeries observed = read_scores_csv(scores_path);
    const LabelSet labels = read_labels_csv(labels_path, observed.dim());
    if (labels.dim() > observed.dim()) {
        throw DataError("labels cover dimension " + std::to_string(labels.dim()) +
                        " but scores only have " + std::to_string(observed.dim()));
    }
    const HorizonSweep sweep =
        horizon_sweep(*ckpt.model, observed, labels, from, to, max_horizon);
    std::cout << "swept " << sweep.anchors.size() << " anchors in [" << from << ", " << to
              << "]\n"
              << render_auc_table(sweep);
    if (!out.empty()) {
        write_auc_csv(out, sweep);
        std::cout << "wrote " << out << "\n";
    }
}

void cmd_run(const std::string& config_path, std::uint64_t seed, const std::string& out) {
    const ExperimentConfig config = ExperimentConfig::from_file(config_path);
    const ExperimentReport report = run_experiment(config, seed, out);
    std::cout << "run complete: " << out << "\n";
    std::cout << "segments:";
    for (const auto len : report.segment_lengths) {
        std::cout << " " << len;
    }
    std::cout << "\ndetector final MSE " << format_double(report.detector_mse)
              << "\nscore model final MSE " << format_double(report.scorecaster_mse) << "\n";
    if (report.protocol == "window") {
        std::cout << render_auc_table(report.window_report);
    } else {
        std::cout << render_auc_table(report.sweep);
    }
}

}  // namespace

int main(int argc, char** argv) {
    try {
        CLI::App app{"Two-layer long-term outlier prediction for time series"};
        app.require_subcommand(1);

        std::string config_path;
        std::string series_path;
        std::string scores_path;
        std::string labels_path;
        std::string model_path;
        std::string out;
        std::uint64_t seed = 0;
        int horizon = 1;
        int max_horizon = 14;
        TimeIndex from = 0;
        TimeIndex to = 0;

        auto* generate = app.add_subcommand("generate", "Generate a dataset with injected outliers");
        generate->add_option("--config", config_path, "experiment config file")->required();
        generate->add_option("--seed", seed, "master seed");
        generate->add_option("--out", out, "output directory");
        generate->callback([&] {
            cmd_generate(config_path, seed, out.empty() ? default_out("dataset") : out);
        });

        auto* train_g = app.add_subcommand("train-detector",
                                           "Train the detection-layer forecaster on segment A");
        train_g->add_option("--config", config_path, "experiment config file")->required();
        train_g->add_option("--seed", seed, "master seed");
        train_g->add_option("--series", series_path, "series CSV (t,x1,...)")->required();
        train_g->add_option("--out", out, "checkpoint path");
        train_g->callback([&] {
            cmd_train_detector(config_path, seed, series_path,
                               out.empty() ? default_out("detector.ckpt") : out);
        });

        auto* score = app.add_subcommand(
            "score", "Convert observations to outlier scores with a trained detector");
        score->add_option("--model", model_path, "detector checkpoint")->required();
        score->add_option("--series", series_path, "series CSV")->required();
        score->add_option("--out", out, "scores CSV path");
        score->callback([&] {
            cmd_score(model_path, series_path, out.empty() ? default_out("scores.csv") : out);
        });

        auto* train_f = app.add_subcommand("train-scorecaster",
                                           "Train the score-prediction layer on observed scores");
        train_f->add_option("--config", config_path, "experiment config file")->required();
        train_f->add_option("--seed", seed, "master seed");
        train_f->add_option("--scores", scores_path, "scores CSV (t,a1,...)")->required();
        train_f->add_option("--out", out, "checkpoint path");
        train_f->callback([&] {
            cmd_train_scorecaster(config_path, seed, scores_path,
                                  out.empty() ? default_out("scorecaster.ckpt") : out);
        });

        auto* fc = app.add_subcommand("forecast",
                                      "Recursively forecast future outlier scores");
        fc->add_option("--model", model_path, "score model checkpoint")->required();
        fc->add_option("--scores", scores_path, "observed scores CSV")->required();
        fc->add_option("--horizon", horizon, "steps to forecast")->required();
        fc->add_option("--out", out, "forecast CSV path");
        fc->callback([&] {
            cmd_forecast(model_path, scores_path, horizon,
                         out.empty() ? default_out("forecast.csv") : out);
        });

        auto* eval = app.add_subcommand("evaluate", "Window AUC of scores against labels");
        eval->add_option("--scores", scores_path, "forecast or scores CSV")->required();
        eval->add_option("--labels", labels_path, "labels CSV (dim,t)")->required();
        eval->add_option("--out", out, "optional AUC CSV path");
        eval->callback([&] { cmd_evaluate(scores_path, labels_path, out); });

        auto* sweep = app.add_subcommand(
            "sweep", "Per-horizon AUC sweep over anchors in a test range");
        sweep->add_option("--model", model_path, "score model checkpoint")->required();
        sweep->add_option("--scores", scores_path, "observed scores CSV")->required();
        sweep->add_option("--labels", labels_path, "labels CSV")->required();
        sweep->add_option("--from", from, "first anchor time")->required();
        sweep->add_option("--to", to, "last time the forecasts may touch")->required();
        sweep->add_option("--max-horizon", max_horizon, "largest horizon k");
        sweep->add_option("--out", out, "optional AUC CSV path");
        sweep->callback([&] {
            cmd_sweep(model_path, scores_path, labels_path, from, to, max_horizon, out);
        });

        auto* run = app.add_subcommand("run", "Run a full experiment from a config");
        run->add_option("--config", config_path, "experiment config file")->required();
        run->add_option("--seed", seed, "master seed");
        run->add_option("--out", out, "report directory");
        run->callback([&] {
            cmd_run(config_path, seed, out.empty() ? default_out("report") : out);
        });

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);  // prints help, exits 0
        } catch (const CLI::ParseError& e) {
            app.exit(e);  // prints the error message
            return 1;
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
