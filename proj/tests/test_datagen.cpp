#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <numbers>
#include <vector>

#include "scorecast/csv.hpp"
#include "scorecast/datagen.hpp"
#include "scorecast/errors.hpp"
#include "scorecast/series.hpp"
#include "support/tempdir.hpp"

using namespace scorecast;
using testsupport::TempDir;

TEST_CASE("sine generator samples sin(t/scale) on the global time grid") {
    const TimeSeries s = gen_sine(100);
    CHECK(s.start_index() == 1);
    CHECK(s.dim() == 1);
    for (TimeIndex t = 1; t <= 100; ++t) {
        CHECK(s.at(t, 0) == std::sin(static_cast<double>(t) / 10.0));
    }
    const TimeSeries from_zero = gen_sine(5, 10.0, 0);
    CHECK(from_zero.at(0, 0) == 0.0);

    const TimeSeries stretched = gen_sine(10, 20.0);
    CHECK(stretched.at(4, 0) == std::sin(0.2));

    CHECK_THROWS_AS(gen_sine(0), DataError);
    CHECK_THROWS_AS(gen_sine(10, 0.0), DataError);
}

TEST_CASE("sine autocorrelation peaks at the 63-sample period") {
    // sin(t/10) has period 20*pi = 62.83 samples, so the sample
    // autocorrelation over integer lags must peak at 63.
    const TimeSeries s = gen_sine(2000);
    const Eigen::VectorXd x = s.values().col(0);
    const double mean = x.mean();
    int best_lag = 0;
    double best = -1e300;
    for (int lag = 40; lag <= 90; ++lag) {
        double num = 0.0;
        for (int i = 0; i + lag < 2000; ++i) {
            num += (x(i) - mean) * (x(i + lag) - mean);
        }
        if (num > best) {
            best = num;
            best_lag = lag;
        }
    }
    CHECK(best_lag == 63);
}

TEST_CASE("sincos generator stays on the unit circle") {
    const TimeSeries s = gen_sincos(1500);
    CHECK(s.length() == 1500);
    CHECK(s.dim() == 2);
    CHECK(s.at(1, 0) == std::sin(0.1));
    CHECK(s.at(1, 1) == std::cos(0.1));
    double worst = 0.0;
    for (TimeIndex t = 1; t <= 1500; ++t) {
        const double r2 = s.at(t, 0) * s.at(t, 0) + s.at(t, 1) * s.at(t, 1);
        worst = std::max(worst, std::abs(1.0 - r2));
    }
    CHECK(worst < 1e-12);

    const TimeSeries from_zero = gen_sincos(3, 0);
    CHECK(from_zero.at(0, 0) == 0.0);
    CHECK(from_zero.at(0, 1) == 1.0);
}

TEST_CASE("periodic injection hits every positive multiple of the period") {
    const TimeSeries clean = gen_sine(1500);
    NoiseSpec noise;  // N(0, 0.5)
    const GeneratedDataset d = inject_periodic(clean, 50, noise, 42);

    REQUIRE(d.labels.dim() == 1);
    const auto& hits = d.labels.indices(0);
    REQUIRE(hits.size() == 30);  // 50, 100, ..., 1500: endpoint included
    for (std::size_t m = 0; m < hits.size(); ++m) {
        CHECK(hits[m] == static_cast<TimeIndex>(50 * (m + 1)));
    }

    // The perturbed series differs from the clean one exactly at the labels.
    for (TimeIndex t = 1; t <= 1500; ++t) {
        const double diff = d.series.at(t, 0) - d.clean.at(t, 0);
        if (d.labels.contains(0, t)) {
            CHECK(diff != 0.0);
        } else {
            CHECK(diff == 0.0);
        }
    }

    // Same seed reproduces the draws bit for bit; a different seed does not.
    const GeneratedDataset again = inject_periodic(clean, 50, noise, 42);
    CHECK((again.series.values() - d.series.values()).cwiseAbs().maxCoeff() == 0.0);
    const GeneratedDataset other = inject_periodic(clean, 50, noise, 43);
    CHECK((other.series.values() - d.series.values()).cwiseAbs().maxCoeff() > 0.0);

    CHECK_THROWS_AS(inject_periodic(clean, 0, noise, 1), DataError);
}

TEST_CASE("injection times are positive multiples even when the grid starts at zero") {
    const TimeSeries clean = gen_sine(10, 10.0, 0);  // t = 0..9
    NoiseSpec noise;
    const GeneratedDataset d = inject_periodic(clean, 3, noise, 7);
    const auto& hits = d.labels.indices(0);
    REQUIRE(hits.size() == 3);
    CHECK(hits[0] == 3);  // not t=0
    CHECK(hits[1] == 6);
    CHECK(hits[2] == 9);
}

TEST_CASE("noise second parameter is the standard deviation, not the variance") {
    // E|N(0, sd)| = sd * sqrt(2/pi): 0.399 for sd = 0.5 (vs 0.564 if 0.5 were
    // the variance). A Monte Carlo mean over 10000 draws separates the two
    // conventions by ~50 standard errors.
    Eigen::MatrixXd ramp(20001, 1);
    for (Eigen::Index i = 0; i <= 20000; ++i) {
        ramp(i, 0) = std::sin(static_cast<double>(i) * 0.001);
    }
    const TimeSeries clean(1, std::move(ramp));
    NoiseSpec noise;
    noise.mean = 0.0;
    noise.sd = 0.5;
    const GeneratedDataset d = inject_periodic(clean, 2, noise, 99);
    const Eigen::VectorXd diff = d.series.values().col(0) - d.clean.values().col(0);
    double abs_sum = 0.0, sq_sum = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < diff.size(); ++i) {
        if (diff(i) != 0.0) {
            abs_sum += std::abs(diff(i));
            sq_sum += diff(i) * diff(i);
            ++count;
        }
    }
    REQUIRE(count == 10000);
    const double expected_abs = 0.5 * std::sqrt(2.0 / std::numbers::pi);
    CHECK(std::abs(abs_sum / count - expected_abs) < 0.015);
    CHECK(std::abs(std::sqrt(sq_sum / count) - 0.5) < 0.02);
}

TEST_CASE("relative noise scales with the perturbed column's own spread") {
    const TimeSeries clean = gen_sincos(400);
    const Eigen::VectorXd col = clean.values().col(0);
    const double sd = std::sqrt((col.array() - col.mean()).square().mean());

    NoiseSpec noise;
    noise.mean = 100.0;  // dominates so the sign and magnitude are testable
    noise.sd = 0.01;
    noise.relative_to_std = true;
    const GeneratedDataset d = inject_periodic(clean, 50, noise, 5);
    for (const TimeIndex t : d.labels.indices(0)) {
        const double diff = d.series.at(t, 0) - d.clean.at(t, 0);
        CHECK(diff > 99.0 * sd);
        CHECK(diff < 101.0 * sd);
    }

    // Relative scaling needs a non-constant column.
    Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(100, 1, 3.0);
    CHECK_THROWS_AS(inject_periodic(TimeSeries(1, flat), 10, noise, 1), DataError);
}

TEST_CASE("random mean sign flips the perturbation direction per event") {
    const TimeSeries clean = gen_sine(2000);
    NoiseSpec noise;
    noise.mean = 5.0;
    noise.sd = 0.01;
    noise.random_mean_sign = true;
    const GeneratedDataset d = inject_periodic(clean, 50, noise, 11);
    int positive = 0, negative = 0;
    for (const TimeIndex t : d.labels.indices(0)) {
        const double diff = d.series.at(t, 0) - d.clean.at(t, 0);
        CHECK(std::abs(std::abs(diff) - 5.0) < 0.1);
        (diff > 0 ? positive : negative) += 1;
    }
    CHECK(positive + negative == 40);
    CHECK(positive >= 5);  // both signs occur (each is 2^-40 unlikely to miss)
    CHECK(negative >= 5);
}

TEST_CASE("delayed pairs perturb the source and, lag steps later, the target") {
    const TimeSeries clean = gen_sincos(1500);
    NoiseSpec noise;  // N(0, 0.5)
    const GeneratedDataset d = inject_delayed_pair(clean, 30, 10, 1, 0, noise, 21);

    const auto& sources = d.labels.indices(1);
    const auto& targets = d.labels.indices(0);
    REQUIRE(sources.size() == 30);
    REQUIRE(targets.size() == 30);
    for (std::size_t i = 0; i < 30; ++i) {
        CHECK(targets[i] == sources[i] + 10);
    }

    // Sources keep a minimum separation of lag+1, so pairs never interleave.
    for (std::size_t i = 1; i < sources.size(); ++i) {
        CHECK(sources[i] - sources[i - 1] >= 11);
    }

    // The differences from the clean series sit exactly at the labels.
    for (TimeIndex t = 1; t <= 1500; ++t) {
        for (Eigen::Index j = 0; j < 2; ++j) {
            const double diff = d.series.at(t, j) - d.clean.at(t, j);
            if (d.labels.contains(j, t)) {
                CHECK(diff != 0.0);
            } else {
                CHECK(diff == 0.0);
            }
        }
    }

    // Regeneration is bit-identical.
    const GeneratedDataset again = inject_delayed_pair(clean, 30, 10, 1, 0, noise, 21);
    CHECK((again.series.values() - d.series.values()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero lag places cause and effect at the same time step") {
    const TimeSeries clean = gen_sincos(200);
    NoiseSpec noise;
    const GeneratedDataset d = inject_delayed_pair(clean, 5, 0, 1, 0, noise, 3);
    CHECK(d.labels.indices(0) == d.labels.indices(1));
}

TEST_CASE("delayed pairs refuse counts that cannot keep their separation") {
    const TimeSeries clean = gen_sincos(30);  // t = 1..30, lag 10 -> taus in [1, 20]
    NoiseSpec noise;
    CHECK_NOTHROW(inject_delayed_pair(clean, 2, 10, 1, 0, noise, 1));
    CHECK_THROWS_AS(inject_delayed_pair(clean, 3, 10, 1, 0, noise, 1), DataError);
    CHECK_THROWS_AS(inject_delayed_pair(clean, 0, 10, 1, 0, noise, 1), DataError);
    CHECK_THROWS_AS(inject_delayed_pair(clean, 2, 30, 1, 0, noise, 1), DataError);
    CHECK_THROWS_AS(inject_delayed_pair(clean, 2, 10, 1, 2, noise, 1), DataError);
}

TEST_CASE("generated datasets survive a CSV round trip") {
    TempDir dir("datagen-csv");
    const TimeSeries clean = gen_sincos(300);
    NoiseSpec noise;
    const GeneratedDataset d = inject_delayed_pair(clean, 6, 10, 1, 0, noise, 17);

    write_series_csv(dir.file("series.csv"), d.series);
    write_labels_csv(dir.file("labels.csv"), d.labels);
    const TimeSeries series = read_series_csv(dir.file("series.csv"));
    const LabelSet labels = read_labels_csv(dir.file("labels.csv"));

    CHECK((series.values() - d.series.values()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(labels.dim() == d.labels.dim());
    for (Eigen::Index j = 0; j < labels.dim(); ++j) {
        CHECK(labels.indices(j) == d.labels.indices(j));
    }
}

TEST_CASE("csv loader selects columns, drops incomplete rows, and re-indexes") {
    TempDir dir("csv-loader");
    const std::string path = dir.file("data.csv");
    std::ofstream out(path);
    out << "year,TEMP,PRES,note\n"
        << "2010,1.5,1020,a\n"
        << "2010,NA,1021,b\n"   // dropped: NA in a selected column
        << "2010,2.5,,c\n"      // dropped: empty PRES
        << "2010,3.5,1023,d\n"
        << "2010,4.5,1024,\n"   // kept: the empty column is not selected
        << "2010,5.5,1025,f\n";
    out.close();

    const LoadedCsv loaded = load_csv_columns(path, {"TEMP", "PRES"});
    CHECK(loaded.dropped_rows == 2);
    CHECK(loaded.series.start_index() == 1);
    CHECK(loaded.series.length() == 4);
    CHECK(loaded.series.dim() == 2);
    CHECK(loaded.series.at(1, 0) == 1.5);
    CHECK(loaded.series.at(1, 1) == 1020.0);
    CHECK(loaded.series.at(2, 0) == 3.5);
    CHECK(loaded.series.at(4, 0) == 5.5);

    // Column order follows the selection, not the file.
    const LoadedCsv swapped = load_csv_columns(path, {"PRES", "TEMP"});
    CHECK(swapped.series.at(1, 0) == 1020.0);
    CHECK(swapped.series.at(1, 1) == 1.5);

    // Offset and limit apply after the drop, and the result starts at t=1.
    const LoadedCsv windowed = load_csv_columns(path, {"TEMP"}, 1, 2);
    CHECK(windowed.series.length() == 2);
    CHECK(windowed.series.start_index() == 1);
    CHECK(windowed.series.at(1, 0) == 3.5);
    CHECK(windowed.series.at(2, 0) == 4.5);

    CHECK_THROWS_AS(load_csv_columns(path, {"HUMIDITY"}), DataError);
    CHECK_THROWS_AS(load_csv_columns(path, {}), DataError);
    CHECK_THROWS_AS(load_csv_columns(path, {"TEMP"}, 10, -1), DataError);
    CHECK_THROWS_AS(load_csv_columns(path, {"TEMP"}, 0, 99), DataError);
    CHECK_THROWS_AS(load_csv_columns(dir.file("nope.csv"), {"TEMP"}), DataError);
}
