#include "scorecast/ridge.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "scorecast/errors.hpp"

namespace scorecast {

namespace {

// Flattens a w x D window into one feature row (time-major), leaving the
// caller to append the intercept column.
template <typename Row>
void fill_features(Row&& row, const Eigen::Ref<const Eigen::MatrixXd>& window) {
    const Eigen::Index d = window.cols();
    for (Eigen::Index t = 0; t < window.rows(); ++t) {
        row.segment(t * d, d) = window.row(t);
    }
}

}  // namespace

RidgeAr::RidgeAr(Eigen::Index dim, Window window, double lambda)
    : dim_(dim), window_(window.size), lambda_(lambda) {
    if (dim < 1) {
        throw DataError("ridge: dimension must be at least 1, got " + std::to_string(dim));
    }
    if (lambda < 0.0 || !std::isfinite(lambda)) {
        throw DataError("ridge: lambda must be finite and nonnegative");
    }
}

RidgeAr::RidgeAr(Eigen::Index dim, Window window, double lambda, Eigen::MatrixXd weights)
    : RidgeAr(dim, window, lambda) {
    const Eigen::Index rows = static_cast<Eigen::Index>(window_) * dim_ + 1;
    if (weights.rows() != rows || weights.cols() != dim_) {
        throw DataError("ridge: weight matrix must be " + std::to_string(rows) + "x" +
                        std::to_string(dim_));
    }
    weights_ = std::move(weights);
    fitted_ = true;
}

void RidgeAr::fit(const WindowedDataset& data) {
    if (data.dim() != dim_ || data.window() != window_) {
        throw DataError("ridge fit: dataset shape does not match model");
    }
    const Eigen::Index n = data.size();
    const Eigen::Index p = static_cast<Eigen::Index>(window_) * dim_ + 1;

    Eigen::MatrixXd phi(n, p);
    Eigen::MatrixXd targets(n, dim_);
    for (Eigen::Index i = 0; i < n; ++i) {
        fill_features(phi.row(i).head(p - 1), data.input(i));
        phi(i, p - 1) = 1.0;
        targets.row(i) = data.target(i);
    }

    Eigen::MatrixXd normal = (phi.transpose() * phi) / static_cast<double>(n);
    normal.diagonal().head(p - 1).array() += lambda_;  // intercept unpenalized
    const Eigen::MatrixXd rhs = (phi.transpose() * targets) / static_cast<double>(n);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normal);
    if (qr.rank() < p) {
        throw DataError(
            "ridge fit: normal matrix is singular; refit with lambda > 0 to regularize");
    }
    weights_ = qr.solve(rhs);
    if (!weights_.allFinite()) {
        throw NumericalError("ridge fit: solution contains non-finite weights");
    }
    fitted_ = true;
}

const Eigen::MatrixXd& RidgeAr::weights() const {
    if (!fitted_) {
        throw DataError("ridge: model has not been fitted");
    }
    return weights_;
}

Eigen::VectorXd RidgeAr::predict_one(const Eigen::Ref<const Eigen::MatrixXd>& recent) const {
    if (!fitted_) {
        throw DataError("ridge predict: model has not been fitted");
    }
    if (recent.rows() != window_ || recent.cols() != dim_) {
        throw DataError("ridge predict: expected a " + std::to_string(window_) + "x" +
                        std::to_string(dim_) + " window");
    }
    const Eigen::Index p = weights_.rows();
    Eigen::RowVectorXd features(p);
    fill_features(features.head(p - 1), recent);
    features(p - 1) = 1.0;
    return (features * weights_).transpose();
}

Eigen::MatrixXd RidgeAr::predict_many(const Eigen::Ref<const Eigen::MatrixXd>& stacked,
                                      Eigen::Index count) const {
    if (!fitted_) {
        throw DataError("ridge predict: model has not been fitted");
    }
    if (count < 0 || stacked.rows() != count * window_ || stacked.cols() != dim_) {
        throw DataError("ridge predict_many: input shape does not match window layout");
    }
    const Eigen::Index p = weights_.rows();
    Eigen::MatrixXd phi(count, p);
    for (Eigen::Index i = 0; i < count; ++i) {
        fill_features(phi.row(i).head(p - 1), stacked.middleRows(i * window_, window_));
        phi(i, p - 1) = 1.0;
    }
    return phi * weights_;
}

void RidgeAr::save(std::ostream& out) const {
    if (!fitted_) {
        throw DataError("ridge save: model has not been fitted");
    }
    out << "ridge\n";
    out << "dim " << dim_ << "\n";
    out << "window " << window_ << "\n";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", lambda_);
    out << "lambda " << buf << "\n";
    out << "weights " << weights_.rows() << " " << weights_.cols() << "\n";
    for (Eigen::Index r = 0; r < weights_.rows(); ++r) {
        for (Eigen::Index c = 0; c < weights_.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%a", weights_(r, c));
            out << buf << (c + 1 == weights_.cols() ? "\n" : " ");
        }
    }
}

}  // namespace scorecast
