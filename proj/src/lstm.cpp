#include "scorecast/lstm.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "scorecast/errors.hpp"

namespace scorecast {

namespace {

// Elementwise logistic function, evaluated to a plain matrix.
template <typename Derived>
Eigen::MatrixXd sigmoid(const Eigen::MatrixBase<Derived>& z) {
    return (1.0 / (1.0 + (-z.derived().array()).exp())).matrix();
}

}  // namespace

LstmNet::LstmNet(Eigen::Index dim, int hidden, Window window)
    : dim_(dim), hidden_(hidden), window_(window.size) {
    if (dim < 1) {
        throw DataError("lstm: dimension must be at least 1, got " + std::to_string(dim));
    }
    if (hidden < 1) {
        throw DataError("lstm: hidden size must be at least 1, got " + std::to_string(hidden));
    }
    params_ = Eigen::VectorXd::Zero(param_count(dim, hidden));
}

Eigen::Index LstmNet::param_count(Eigen::Index dim, int hidden) {
    const Eigen::Index h = hidden;
    return 4 * h * (dim + h + 1) + h * dim + dim;
}

LstmNet::Offsets LstmNet::offsets() const {
    const Eigen::Index h = hidden_;
    Offsets o;
    o.wx = 0;
    o.wh = o.wx + 4 * h * dim_;
    o.b = o.wh + 4 * h * h;
    o.wy = o.b + 4 * h;
    o.by = o.wy + dim_ * h;
    o.total = o.by + dim_;
    return o;
}

Eigen::Map<const Eigen::MatrixXd> LstmNet::wx() const {
    return {params_.data() + offsets().wx, 4 * hidden_, dim_};
}
Eigen::Map<const Eigen::MatrixXd> LstmNet::wh() const {
    return {params_.data() + offsets().wh, 4 * hidden_, hidden_};
}
Eigen::Map<const Eigen::VectorXd> LstmNet::b() const {
    return {params_.data() + offsets().b, 4 * hidden_};
}
Eigen::Map<const Eigen::MatrixXd> LstmNet::wy() const {
    return {params_.data() + offsets().wy, dim_, hidden_};
}
Eigen::Map<const Eigen::VectorXd> LstmNet::by() const {
    return {params_.data() + offsets().by, dim_};
}
Eigen::Map<Eigen::MatrixXd> LstmNet::wx() {
    return {params_.data() + offsets().wx, 4 * hidden_, dim_};
}
Eigen::Map<Eigen::MatrixXd> LstmNet::wh() {
    return {params_.data() + offsets().wh, 4 * hidden_, hidden_};
}
Eigen::Map<Eigen::VectorXd> LstmNet::b() {
    return {params_.data() + offsets().b, 4 * hidden_};
}
Eigen::Map<Eigen::MatrixXd> LstmNet::wy() {
    return {params_.data() + offsets().wy, dim_, hidden_};
}
Eigen::Map<Eigen::VectorXd> LstmNet::by() {
    return {params_.data() + offsets().by, dim_};
}

void LstmNet::init_params(Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_));
    const Offsets o = offsets();
    // Input and readout weights get uniform draws in flat storage order;
    // biases are deterministic so they consume no randomness.
    for (Eigen::Index i = o.wx; i < o.wh; ++i) {
        params_[i] = rng.uniform(-bound, bound);
    }
    // The recurrent matrix is orthogonal per gate: rotations neither damp nor
    // blow up hidden-state signals, which is what lets the recurrence carry
    // information across spans comparable to the window length.
    const Eigen::Index h = hidden_;
    Eigen::MatrixXd gaussian(h, h);
    Eigen::Map<Eigen::MatrixXd> wh_map(params_.data() + o.wh, 4 * h, h);
    for (int gate = 0; gate < 4; ++gate) {
        for (Eigen::Index col = 0; col < h; ++col) {
            for (Eigen::Index row = 0; row < h; ++row) {
                gaussian(row, col) = rng.normal();
            }
        }
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
        Eigen::MatrixXd q = qr.householderQ();
        const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        // Fixing the signs against R's diagonal makes Q uniformly distributed
        // over the orthogonal group rather than biased by the QR convention.
        for (Eigen::Index col = 0; col < h; ++col) {
            if (r(col, col) < 0.0) {
                q.col(col) = -q.col(col);
            }
        }
        wh_map.middleRows(gate * h, h) = q;
    }
    params_.segment(o.b, 4 * h).setZero();
    params_.segment(o.b + h, h).setOnes();  // forget-gate bias
    for (Eigen::Index i = o.wy; i < o.by; ++i) {
        params_[i] = rng.uniform(-bound, bound);
    }
    params_.segment(o.by, dim_).setZero();
}

Eigen::MatrixXd LstmNet::forward_batch(const std::vector<Eigen::MatrixXd>& steps,
                                       Cache* cache) const {
    if (static_cast<int>(steps.size()) != window_) {
        throw DataError("lstm forward: expected " + std::to_string(window_) + " steps, got " +
                        std::to_string(steps.size()));
    }
    const Eigen::Index batch = steps[0].rows();
    if (batch < 1) {
        throw DataError("lstm forward: empty batch");
    }
    const Eigen::Index h = hidden_;
    const Eigen::RowVectorXd b_row = b().transpose();

    if (cache != nullptr) {
        cache->batch = batch;
        cache->x = steps;
        cache->gi.resize(window_);
        cache->gf.resize(window_);
        cache->gg.resize(window_);
        cache->go.resize(window_);
        cache->c.resize(window_);
        cache->tc.resize(window_);
        cache->h.resize(window_);
    }

    Eigen::MatrixXd hidden = Eigen::MatrixXd::Zero(batch, h);
    Eigen::MatrixXd cell = Eigen::MatrixXd::Zero(batch, h);
    Eigen::MatrixXd z(batch, 4 * h);

    for (int t = 0; t < window_; ++t) {
        const Eigen::MatrixXd& xt = steps[t];
        if (xt.rows() != batch || xt.cols() != dim_) {
            throw DataError("lstm forward: step " + std::to_string(t) + " has shape " +
                            std::to_string(xt.rows()) + "x" + std::to_string(xt.cols()));
        }
        z.noalias() = xt * wx().transpose();
        z.noalias() += hidden * wh().transpose();
        z.rowwise() += b_row;

        Eigen::MatrixXd gi = sigmoid(z.leftCols(h));
        Eigen::MatrixXd gf = sigmoid(z.middleCols(h, h));
        Eigen::MatrixXd gg = z.middleCols(2 * h, h).array().tanh().matrix();
        Eigen::MatrixXd go = sigmoid(z.rightCols(h));

        cell = (gf.array() * cell.array() + gi.array() * gg.array()).matrix();
        Eigen::MatrixXd tc = cell.array().tanh().matrix();
        hidden = (go.array() * tc.array()).matrix();

        if (cache != nullptr) {
            cache->gi[t] = std::move(gi);
            cache->gf[t] = std::move(gf);
            cache->gg[t] = std::move(gg);
            cache->go[t] = std::move(go);
            cache->c[t] = cell;
            cache->tc[t] = std::move(tc);
            cache->h[t] = hidden;
        }
    }

    Eigen::MatrixXd prediction = hidden * wy().transpose();
    prediction.rowwise() += by().transpose();
    if (cache != nullptr) {
        cache->prediction = prediction;
    }
    return prediction;
}

Eigen::VectorXd LstmNet::backward_batch(const Cache& cache,
                                        const Eigen::MatrixXd& d_prediction) const {
    const Eigen::Index h = hidden_;
    const Eigen::Index batch = cache.batch;
    if (d_prediction.rows() != batch || d_prediction.cols() != dim_) {
        throw DataError("lstm backward: loss gradient shape mismatch");
    }

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(params_.size());
    const Offsets off = offsets();
    Eigen::Map<Eigen::MatrixXd> dwx(grad.data() + off.wx, 4 * h, dim_);
    Eigen::Map<Eigen::MatrixXd> dwh(grad.data() + off.wh, 4 * h, hidden_);
    Eigen::Map<Eigen::VectorXd> db(grad.data() + off.b, 4 * h);
    Eigen::Map<Eigen::MatrixXd> dwy(grad.data() + off.wy, dim_, hidden_);
    Eigen::Map<Eigen::VectorXd> dby(grad.data() + off.by, dim_);

    dwy.noalias() = d_prediction.transpose() * cache.h[window_ - 1];
    dby = d_prediction.colwise().sum().transpose();

    Eigen::MatrixXd dh = d_prediction * wy();           // B x H
    Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(batch, h);
    Eigen::MatrixXd dz(batch, 4 * h);

    for (int t = window_ - 1; t >= 0; --t) {
        const auto& gi = cache.gi[t].array();
        const auto& gf = cache.gf[t].array();
        const auto& gg = cache.gg[t].array();
        const auto& go = cache.go[t].array();
        const auto& tc = cache.tc[t].array();

        dc.array() += dh.array() * go * (1.0 - tc.square());

        dz.leftCols(h) = ((dc.array() * gg) * gi * (1.0 - gi)).matrix();
        if (t > 0) {
            dz.middleCols(h, h) =
                ((dc.array() * cache.c[t - 1].array()) * gf * (1.0 - gf)).matrix();
        } else {
            dz.middleCols(h, h).setZero();  // initial cell state is zero
        }
        dz.middleCols(2 * h, h) = ((dc.array() * gi) * (1.0 - gg.square())).matrix();
        dz.rightCols(h) = ((dh.array() * tc) * go * (1.0 - go)).matrix();

        dwx.noalias() += dz.transpose() * cache.x[t];
        if (t > 0) {
            dwh.noalias() += dz.transpose() * cache.h[t - 1];
        }
        db += dz.colwise().sum().transpose();

        dh.noalias() = dz * wh();
        dc.array() *= gf;
    }
    return grad;
}

Eigen::VectorXd LstmNet::predict_one(const Eigen::Ref<const Eigen::MatrixXd>& recent) const {
    if (recent.rows() != window_ || recent.cols() != dim_) {
        throw DataError("lstm predict: expected a " + std::to_string(window_) + "x" +
                        std::to_string(dim_) + " window, got " + std::to_string(recent.rows()) +
                        "x" + std::to_string(recent.cols()));
    }
    const Eigen::Index h = hidden_;
    Eigen::VectorXd hidden = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd cell = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd z(4 * h);
    for (int t = 0; t < window_; ++t) {
        z.noalias() = wx() * recent.row(t).transpose();
        z.noalias() += wh() * hidden;
        z += b();
        const Eigen::ArrayXd gi = sigmoid(z.head(h)).array();
        const Eigen::ArrayXd gf = sigmoid(z.segment(h, h)).array();
        const Eigen::ArrayXd gg = z.segment(2 * h, h).array().tanh();
        const Eigen::ArrayXd go = sigmoid(z.tail(h)).array();
        cell = (gf * cell.array() + gi * gg).matrix();
        hidden = (go * cell.array().tanh()).matrix();
    }
    Eigen::VectorXd out = wy() * hidden;
    out += by();
    return out;
}

Eigen::MatrixXd LstmNet::predict_many(const Eigen::Ref<const Eigen::MatrixXd>& stacked,
                                      Eigen::Index count) const {
    if (count < 0 || stacked.rows() != count * window_ || stacked.cols() != dim_) {
        throw DataError("lstm predict_many: input shape does not match window layout");
    }
    if (count == 0) {
        return Eigen::MatrixXd(0, dim_);
    }
    // Regroup rows so step t of every window forms one B x D matrix; the
    // whole batch then runs through shared GEMMs instead of per-window GEMVs.
    std::vector<Eigen::MatrixXd> steps(window_, Eigen::MatrixXd(count, dim_));
    for (Eigen::Index i = 0; i < count; ++i) {
        for (int t = 0; t < window_; ++t) {
            steps[t].row(i) = stacked.row(i * window_ + t);
        }
    }
    return forward_batch(steps, nullptr);
}

void LstmNet::save(std::ostream& out) const {
    out << "lstm\n";
    out << "dim " << dim_ << "\n";
    out << "hidden " << hidden_ << "\n";
    out << "window " << window_ << "\n";
    out << "params " << params_.size() << "\n";
    char buf[48];
    for (Eigen::Index i = 0; i < params_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%a", params_[i]);
        out << buf << ((i + 1) % 4 == 0 ? "\n" : " ");
    }
    if (params_.size() % 4 != 0) {
        out << "\n";
    }
}

}  // namespace scorecast
