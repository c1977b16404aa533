// Independent reference implementations used to check the library against.
// Everything here is deliberately naive: brute force, scalar loops, and
// numerical differentiation, so the main code can be validated against
// implementations that share none of its structure.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

// Pairwise AUC in O(n_pos * n_neg): the probability a random positive
// outranks a random negative, ties counting half.
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<bool>& labels) {
    double wins = 0.0;
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) {
            continue;
        }
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) {
                continue;
            }
            ++pairs;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

// Central finite-difference gradient of an arbitrary scalar objective.
inline Eigen::VectorXd finite_difference_gradient(
    const std::function<double(const Eigen::VectorXd&)>& objective, const Eigen::VectorXd& at,
    double h = 1e-5) {
    Eigen::VectorXd grad(at.size());
    Eigen::VectorXd probe = at;
    for (Eigen::Index i = 0; i < at.size(); ++i) {
        const double keep = probe(i);
        probe(i) = keep + h;
        const double up = objective(probe);
        probe(i) = keep - h;
        const double down = objective(probe);
        probe(i) = keep;
        grad(i) = (up - down) / (2.0 * h);
    }
    return grad;
}

// Scalar re-implementation of the recurrent cell's forward pass, written
// with explicit loops and per-element arithmetic. Parameters use the same
// flat layout as the library: [wx 4H x D | wh 4H x H | b 4H | wy D x H | by D],
// gate rows ordered input, forget, candidate, output.
inline Eigen::VectorXd scalar_recurrent_forward(const Eigen::VectorXd& params, int hidden,
                                                int dim, const Eigen::MatrixXd& window) {
    const int H = hidden;
    const int D = dim;
    const auto wx = [&](int r, int c) { return params(r + 4 * H * 0 + c * 4 * H); };
    const Eigen::Index wh_off = static_cast<Eigen::Index>(4 * H) * D;
    const auto wh = [&](int r, int c) { return params(wh_off + r + c * 4 * H); };
    const Eigen::Index b_off = wh_off + static_cast<Eigen::Index>(4 * H) * H;
    const auto b = [&](int r) { return params(b_off + r); };
    const Eigen::Index wy_off = b_off + 4 * H;
    const auto wy = [&](int r, int c) { return params(wy_off + r + c * D); };
    const Eigen::Index by_off = wy_off + static_cast<Eigen::Index>(D) * H;
    const auto by = [&](int r) { return params(by_off + r); };

    std::vector<double> h(static_cast<std::size_t>(H), 0.0);
    std::vector<double> cell(static_cast<std::size_t>(H), 0.0);
    const auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };

    for (Eigen::Index t = 0; t < window.rows(); ++t) {
        std::vector<double> next_h(static_cast<std::size_t>(H));
        std::vector<double> next_c(static_cast<std::size_t>(H));
        for (int u = 0; u < H; ++u) {
            double zi = b(u);
            double zf = b(H + u);
            double zg = b(2 * H + u);
            double zo = b(3 * H + u);
            for (int j = 0; j < D; ++j) {
                const double x = window(t, j);
                zi += wx(u, j) * x;
                zf += wx(H + u, j) * x;
                zg += wx(2 * H + u, j) * x;
                zo += wx(3 * H + u, j) * x;
            }
            for (int v = 0; v < H; ++v) {
                zi += wh(u, v) * h[static_cast<std::size_t>(v)];
                zf += wh(H + u, v) * h[static_cast<std::size_t>(v)];
                zg += wh(2 * H + u, v) * h[static_cast<std::size_t>(v)];
                zo += wh(3 * H + u, v) * h[static_cast<std::size_t>(v)];
            }
            const double gi = sigmoid(zi);
            const double gf = sigmoid(zf);
            const double gg = std::tanh(zg);
            const double go = sigmoid(zo);
            next_c[static_cast<std::size_t>(u)] = gf * cell[static_cast<std::size_t>(u)] + gi * gg;
            next_h[static_cast<std::size_t>(u)] =
                go * std::tanh(next_c[static_cast<std::size_t>(u)]);
        }
        h = next_h;
        cell = next_c;
    }

    Eigen::VectorXd out(D);
    for (int r = 0; r < D; ++r) {
        double y = by(r);
        for (int c = 0; c < H; ++c) {
            y += wy(r, c) * h[static_cast<std::size_t>(c)];
        }
        out(r) = y;
    }
    return out;
}

}  // namespace oracles
