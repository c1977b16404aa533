#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "scorecast/adam.hpp"
#include "scorecast/errors.hpp"
#include "scorecast/lstm.hpp"
#include "scorecast/ridge.hpp"
#include "scorecast/rng.hpp"
#include "support/oracles.hpp"

using namespace scorecast;

namespace {

// Mean squared error of the net on a batch, as a function of a flat
// parameter vector. Used as the objective for numerical differentiation.
double batch_mse(LstmNet& net, const Eigen::VectorXd& params,
                 const std::vector<Eigen::MatrixXd>& steps, const Eigen::MatrixXd& targets) {
    net.params() = params;
    const Eigen::MatrixXd pred = net.forward_batch(steps, nullptr);
    return (pred - targets).squaredNorm() /
           static_cast<double>(targets.rows() * targets.cols());
}

std::vector<Eigen::MatrixXd> random_steps(Rng& rng, int window, Eigen::Index batch,
                                          Eigen::Index dim) {
    std::vector<Eigen::MatrixXd> steps(static_cast<std::size_t>(window));
    for (auto& step : steps) {
        step.resize(batch, dim);
        for (Eigen::Index i = 0; i < batch; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                step(i, j) = rng.uniform(-1.0, 1.0);
            }
        }
    }
    return steps;
}

}  // namespace

TEST_CASE("adam follows the textbook update for two hand-computed steps") {
    AdamConfig config;
    config.learning_rate = 0.1;
    Adam opt(2, config);
    Eigen::VectorXd params(2);
    params << 1.0, -2.0;
    Eigen::VectorXd grads(2);
    grads << 0.5, -1.0;

    // Step 1: m = (1-b1)g, v = (1-b2)g^2, and the bias corrections cancel the
    // same factors, so the update direction is g/(|g| + eps') elementwise.
    Eigen::VectorXd m = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd expected = params;
    for (int step = 1; step <= 2; ++step) {
        m = 0.9 * m + 0.1 * grads;
        v = 0.999 * v + 0.001 * grads.cwiseProduct(grads);
        const double mc = 1.0 - std::pow(0.9, step);
        const double vc = 1.0 - std::pow(0.999, step);
        for (int i = 0; i < 2; ++i) {
            expected(i) -= 0.1 * (m(i) / mc) / (std::sqrt(v(i) / vc) + 1e-8);
        }
        opt.step(params, grads);
        CAPTURE(step);
        CHECK(params(0) == doctest::Approx(expected(0)).epsilon(1e-15));
        CHECK(params(1) == doctest::Approx(expected(1)).epsilon(1e-15));
    }
    CHECK(opt.step_count() == 2);
}

TEST_CASE("ridge solves the regularized normal equations") {
    // Small system solved here against an explicit dense construction.
    Rng rng(7);
    const int w = 3;
    const Eigen::Index d = 2;
    const Eigen::Index n = 40;
    Eigen::MatrixXd data(n + w, d);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            data(i, j) = rng.uniform(-1.0, 1.0);
        }
    }
    const double lambda = 0.3;
    RidgeAr model(d, Window(w), lambda);
    model.fit(WindowedDataset(data, Window(w)));

    // Build the feature matrix exactly as documented: window rows oldest
    // first, flattened time-major, then a trailing 1.
    const Eigen::Index p = w * d + 1;
    Eigen::MatrixXd phi(n, p);
    Eigen::MatrixXd y(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int t = 0; t < w; ++t) {
            for (Eigen::Index j = 0; j < d; ++j) {
                phi(i, t * d + j) = data(i + t, j);
            }
        }
        phi(i, p - 1) = 1.0;
        y.row(i) = data.row(i + w);
    }
    Eigen::MatrixXd normal = phi.transpose() * phi / static_cast<double>(n);
    for (Eigen::Index k = 0; k + 1 < p; ++k) {
        normal(k, k) += lambda;
    }
    const Eigen::MatrixXd expected =
        normal.ldlt().solve(phi.transpose() * y / static_cast<double>(n));

    CHECK((model.weights() - expected).cwiseAbs().maxCoeff() < 1e-10);

    // Predictions follow the same weights.
    const Eigen::VectorXd pred = model.predict_one(data.topRows(w));
    Eigen::VectorXd feat(p);
    for (int t = 0; t < w; ++t) {
        for (Eigen::Index j = 0; j < d; ++j) {
            feat(t * d + j) = data(t, j);
        }
    }
    feat(p - 1) = 1.0;
    const Eigen::VectorXd expected_pred = expected.transpose() * feat;
    CHECK((pred - expected_pred).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ridge objective is invariant to duplicating the dataset") {
    Rng rng(11);
    Eigen::MatrixXd data(30, 1);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        data(i, 0) = rng.normal();
    }
    RidgeAr a(1, Window(2), 0.5);
    a.fit(WindowedDataset(data, Window(2)));

    // Solve the normal equations directly on every pair listed twice; the
    // averaged objective must yield the same weights as the single fit.
    const Eigen::Index w = 2, n = data.rows() - w;
    Eigen::MatrixXd phi(2 * n, 3), y(2 * n, 1);
    for (Eigen::Index copy = 0; copy < 2; ++copy) {
        for (Eigen::Index i = 0; i < n; ++i) {
            phi(copy * n + i, 0) = data(i, 0);
            phi(copy * n + i, 1) = data(i + 1, 0);
            phi(copy * n + i, 2) = 1.0;
            y(copy * n + i, 0) = data(i + 2, 0);
        }
    }
    Eigen::MatrixXd normal = phi.transpose() * phi / (2.0 * static_cast<double>(n));
    normal(0, 0) += 0.5;
    normal(1, 1) += 0.5;
    const Eigen::MatrixXd doubled_fit =
        normal.ldlt().solve(phi.transpose() * y / (2.0 * static_cast<double>(n)));
    CHECK((a.weights() - doubled_fit).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ridge with zero penalty recovers an exact linear rule") {
    // x_{t+1} = 0.9 x_t - 0.2 x_{t-1} + 3, exactly representable.
    Eigen::MatrixXd data(60, 1);
    data(0, 0) = 0.3;
    data(1, 0) = -0.6;
    for (Eigen::Index i = 2; i < data.rows(); ++i) {
        data(i, 0) = 0.9 * data(i - 1, 0) - 0.2 * data(i - 2, 0) + 3.0;
    }
    RidgeAr model(1, Window(2), 0.0);
    model.fit(WindowedDataset(data, Window(2)));
    CHECK(model.weights()(0, 0) == doctest::Approx(-0.2).epsilon(1e-6));
    CHECK(model.weights()(1, 0) == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(model.weights()(2, 0) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("ridge penalizes slopes but not the intercept") {
    // On a constant series the unpenalized intercept should carry the whole
    // prediction, leaving the (penalized) slope weights near zero.
    Eigen::MatrixXd data = Eigen::MatrixXd::Constant(50, 1, 4.0);
    RidgeAr model(1, Window(3), 1.0);
    model.fit(WindowedDataset(data, Window(3)));
    const Eigen::VectorXd pred = model.predict_one(data.topRows(3));
    CHECK(pred(0) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(std::abs(model.weights()(0, 0)) < 0.2);
}

TEST_CASE("lstm forward pass matches a scalar reimplementation") {
    Rng rng(42);
    const int hidden = 3;
    const Eigen::Index dim = 2;
    const int w = 4;
    LstmNet net(dim, hidden, Window(w));
    net.init_params(rng);
    for (int rep = 0; rep < 5; ++rep) {
        Eigen::MatrixXd window(w, dim);
        for (int t = 0; t < w; ++t) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                window(t, j) = rng.normal();
            }
        }
        const Eigen::VectorXd got = net.predict_one(window);
        const Eigen::VectorXd want =
            oracles::scalar_recurrent_forward(net.params(), hidden, static_cast<int>(dim), window);
        CAPTURE(rep);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("lstm batched forward agrees with per-window prediction") {
    Rng rng(5);
    LstmNet net(2, 4, Window(6));
    net.init_params(rng);
    const Eigen::Index batch = 7;
    const auto steps = random_steps(rng, 6, batch, 2);
    const Eigen::MatrixXd batched = net.forward_batch(steps, nullptr);
    for (Eigen::Index i = 0; i < batch; ++i) {
        Eigen::MatrixXd window(6, 2);
        for (int t = 0; t < 6; ++t) {
            window.row(t) = steps[static_cast<std::size_t>(t)].row(i);
        }
        CHECK((net.predict_one(window) - batched.row(i).transpose()).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("lstm gradient matches central finite differences") {
    Rng rng(2026);
    for (int instance = 0; instance < 10; ++instance) {
        const int hidden = 1 + static_cast<int>(rng.uniform_int(1, 8));
        const Eigen::Index dim = rng.uniform_int(1, 2);
        const int w = static_cast<int>(rng.uniform_int(2, 8));
        const Eigen::Index batch = rng.uniform_int(1, 3);
        LstmNet net(dim, hidden, Window(w));
        net.init_params(rng);

        const auto steps = random_steps(rng, w, batch, dim);
        Eigen::MatrixXd targets(batch, dim);
        for (Eigen::Index i = 0; i < batch; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                targets(i, j) = rng.uniform(-1.0, 1.0);
            }
        }

        LstmNet::Cache cache;
        const Eigen::MatrixXd pred = net.forward_batch(steps, &cache);
        const double scale = 2.0 / static_cast<double>(batch * dim);
        const Eigen::VectorXd analytic = net.backward_batch(cache, scale * (pred - targets));

        const Eigen::VectorXd saved = net.params();
        const Eigen::VectorXd numeric = oracles::finite_difference_gradient(
            [&](const Eigen::VectorXd& p) { return batch_mse(net, p, steps, targets); }, saved);
        net.params() = saved;

        const double denom = std::max(analytic.norm(), numeric.norm());
        REQUIRE(denom > 0.0);
        const double rel = (analytic - numeric).norm() / denom;
        CAPTURE(instance);
        CAPTURE(hidden);
        CAPTURE(w);
        CHECK(rel < 1e-6);
    }
}

TEST_CASE("lstm with zero parameters predicts zero") {
    LstmNet net(3, 4, Window(5));
    const Eigen::MatrixXd window = Eigen::MatrixXd::Random(5, 3);
    CHECK(net.predict_one(window).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lstm readout bias gradient equals summed prediction gradients") {
    // With dLoss/dPred = G, the readout bias gradient must be the column sums
    // of G regardless of everything upstream.
    Rng rng(9);
    LstmNet net(2, 3, Window(4));
    net.init_params(rng);
    const auto steps = random_steps(rng, 4, 5, 2);
    LstmNet::Cache cache;
    net.forward_batch(steps, &cache);
    Eigen::MatrixXd g(5, 2);
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) {
            g(i, j) = rng.normal();
        }
    }
    const Eigen::VectorXd grad = net.backward_batch(cache, g);
    const Eigen::VectorXd dby = grad.tail(2);
    CHECK((dby - g.colwise().sum().transpose()).cwiseAbs().maxCoeff() < 1e-14);
}
