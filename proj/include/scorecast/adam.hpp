#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace scorecast {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/**
 * Adam with bias correction over a flat parameter vector:
 *
 *   m <- b1*m + (1-b1)*g        mhat = m / (1 - b1^t)
 *   v <- b2*v + (1-b2)*g^2      vhat = v / (1 - b2^t)
 *   theta <- theta - lr * mhat / (sqrt(vhat) + eps)
 */
class Adam {
public:
    Adam(Eigen::Index n, AdamConfig config);

    void step(Eigen::Ref<Eigen::VectorXd> params,
              const Eigen::Ref<const Eigen::VectorXd>& grads);

    std::int64_t step_count() const { return step_; }
    const AdamConfig& config() const { return config_; }

private:
    AdamConfig config_;
    Eigen::ArrayXd m_;
    Eigen::ArrayXd v_;
    std::int64_t step_ = 0;
};

}  // namespace scorecast
