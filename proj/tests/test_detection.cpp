#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "scorecast/datagen.hpp"
#include "scorecast/detection.hpp"
#include "scorecast/errors.hpp"
#include "scorecast/ridge.hpp"
#include "scorecast/series.hpp"
#include "scorecast/training.hpp"

using namespace scorecast;

namespace {

// Clairvoyant forecaster for sin(t/10) on the global grid: given the window
// ending at time t-1 it reconstructs t from the stored phase and returns the
// true next value. Used to pin the zero-residual contract.
class SineOracle final : public Forecaster {
public:
    SineOracle(int window, TimeIndex segment_start) : window_(window), next_(segment_start) {}

    int window() const override { return window_; }
    Eigen::Index dim() const override { return 1; }
    std::string kind() const override { return "sine-oracle"; }

    Eigen::VectorXd predict_one(const Eigen::Ref<const Eigen::MatrixXd>&) const override {
        Eigen::VectorXd out(1);
        out(0) = std::sin(static_cast<double>(next_++) / 10.0);
        return out;
    }

    void save(std::ostream&) const override {}

private:
    int window_;
    mutable TimeIndex next_;  // score_segment walks the segment in order
};

}  // namespace

TEST_CASE("splitting without cut points halves the series") {
    const TimeSeries s = gen_sine(1500);
    const std::vector<TimeSeries> segments = split_series(s, {});
    REQUIRE(segments.size() == 2);
    CHECK(segments[0].length() == 750);
    CHECK(segments[1].length() == 750);
    CHECK(segments[0].start_index() == 1);
    CHECK(segments[1].start_index() == 751);
}

TEST_CASE("explicit cut points carve contiguous covering segments") {
    const TimeSeries s = gen_sine(1500);
    const std::vector<TimeSeries> segments = split_series(s, {500, 1000});
    REQUIRE(segments.size() == 3);
    for (const auto& seg : segments) {
        CHECK(seg.length() == 500);
    }
    CHECK(segments[1].start_index() == 501);
    CHECK(segments[2].start_index() == 1001);
    CHECK(segments[2].end_index() == 1500);
    // The segments tile the original values.
    CHECK(segments[0].at(500, 0) == s.at(500, 0));
    CHECK(segments[1].at(501, 0) == s.at(501, 0));

    const TimeSeries beijing = gen_sine(11500);
    const std::vector<TimeSeries> bj = split_series(beijing, {9500, 10500});
    REQUIRE(bj.size() == 3);
    CHECK(bj[0].length() == 9500);
    CHECK(bj[1].length() == 1000);
    CHECK(bj[2].length() == 1000);
}

TEST_CASE("split rejects out-of-range or unsorted cut points") {
    const TimeSeries s = gen_sine(100);
    CHECK_THROWS_AS(split_series(s, {0}), DataError);
    CHECK_THROWS_AS(split_series(s, {100}), DataError);
    CHECK_THROWS_AS(split_series(s, {60, 40}), DataError);
    CHECK_THROWS_AS(split_series(s, {40, 40}), DataError);
}

TEST_CASE("a perfect forecaster produces all-zero scores") {
    const TimeSeries s = gen_sine(200);
    const std::vector<TimeSeries> segments = split_series(s, {100});
    const SineOracle oracle(30, segments[1].start_index());

    const ScoreSeries scores =
        score_segment(oracle, segments[1], segments[0].tail(30));
    CHECK(scores.start_index() == 101);
    CHECK(scores.length() == 100);
    CHECK(scores.values().cwiseAbs().maxCoeff() == 0.0);
    CHECK(scores.provenance().front() == Provenance::ObservedResidual);
}

TEST_CASE("a ridge detector on a constant series scores near zero") {
    Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(120, 1, 7.0);
    const TimeSeries s(1, flat);
    const std::vector<TimeSeries> segments = split_series(s, {60});

    ModelSpec spec;
    spec.kind = "ridge";
    TrainConfig cfg;
    const TrainResult g = train_forecaster(spec, segments[0], Window(10), cfg);
    const ScoreSeries scores =
        score_segment(*g.model, segments[1], segments[0].tail(10));
    CHECK(scores.values().maxCoeff() < 1e-6);
}

TEST_CASE("scores are absolute residuals, recomputable bit for bit") {
    const TimeSeries noisy = [] {
        GeneratedDataset d = inject_periodic(gen_sine(300), 50, NoiseSpec{}, 9);
        return d.series;
    }();
    const std::vector<TimeSeries> segments = split_series(noisy, {150});

    ModelSpec spec;
    spec.kind = "ridge";
    TrainConfig cfg;
    const TrainResult g = train_forecaster(spec, segments[0], Window(20), cfg);

    const ScoreSeries scores =
        score_segment(*g.model, segments[1], segments[0].tail(20));
    CHECK(scores.values().minCoeff() >= 0.0);

    // Recompute each score with a scalar predict_one walk. The batched path
    // may round differently in the last ulp, hence the tiny tolerance.
    Eigen::MatrixXd history(150 + 150, 1);
    history.topRows(150) = segments[0].values();
    history.bottomRows(150) = segments[1].values();
    for (Eigen::Index i = 0; i < scores.length(); ++i) {
        const Eigen::MatrixXd window = history.middleRows(130 + i, 20);
        const double expected =
            std::abs(segments[1].values()(i, 0) - g.model->predict_one(window)(0));
        CHECK(std::abs(scores.values()(i, 0) - expected) < 1e-12);
    }

    // Scoring the same segment twice is bit-identical.
    const ScoreSeries again =
        score_segment(*g.model, segments[1], segments[0].tail(20));
    CHECK((again.values() - scores.values()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("teacher forcing: a score never depends on later observations") {
    const TimeSeries s = gen_sine(200);
    const std::vector<TimeSeries> segments = split_series(s, {100});

    ModelSpec spec;
    spec.kind = "ridge";
    TrainConfig cfg;
    const TrainResult g = train_forecaster(spec, segments[0], Window(15), cfg);

    // Spike the very last observation of the segment; every score except the
    // last must be unchanged, because prediction inputs are actual
    // observations, never model outputs or future values.
    Eigen::MatrixXd spiked = segments[1].values();
    spiked(99, 0) += 5.0;
    const TimeSeries spiked_segment(segments[1].start_index(), spiked);

    const ScoreSeries base =
        score_segment(*g.model, segments[1], segments[0].tail(15));
    const ScoreSeries perturbed =
        score_segment(*g.model, spiked_segment, segments[0].tail(15));

    CHECK((base.values().topRows(99) - perturbed.values().topRows(99))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(perturbed.values()(99, 0) != base.values()(99, 0));
}

TEST_CASE("an injected spike dominates the scores of a well-trained detector") {
    // One N(0, 0.5) perturbation inside the scored segment: its score must
    // exceed the 99th percentile of all other scores.
    GeneratedDataset d = inject_periodic(gen_sine(300), 250, NoiseSpec{}, 12345);
    REQUIRE(d.labels.indices(0).size() == 1);  // only t=250 in range
    const std::vector<TimeSeries> segments = split_series(d.series, {150});

    ModelSpec spec;
    spec.kind = "ridge";
    TrainConfig cfg;
    const TrainResult g = train_forecaster(spec, segments[0], Window(30), cfg);
    const ScoreSeries scores =
        score_segment(*g.model, segments[1], segments[0].tail(30));

    std::vector<double> rest;
    for (Eigen::Index i = 0; i < scores.length(); ++i) {
        if (scores.start_index() + i != 250) {
            rest.push_back(scores.values()(i, 0));
        }
    }
    std::sort(rest.begin(), rest.end());
    const double p99 = rest[static_cast<std::size_t>(0.99 * rest.size())];
    CHECK(scores.at(250, 0) > p99);
}

TEST_CASE("scoring validates the context block") {
    const TimeSeries s = gen_sine(100);
    const std::vector<TimeSeries> segments = split_series(s, {50});
    ModelSpec spec;
    spec.kind = "ridge";
    const TrainResult g = train_forecaster(spec, segments[0], Window(10), TrainConfig{});

    CHECK_THROWS_AS(score_segment(*g.model, segments[1], segments[0].tail(9)), DataError);
    const Eigen::MatrixXd wide = Eigen::MatrixXd::Zero(10, 2);
    CHECK_THROWS_AS(score_segment(*g.model, segments[1], wide), DataError);
}
