#include "scorecast/forecaster.hpp"

#include "scorecast/errors.hpp"

namespace scorecast {

Eigen::MatrixXd Forecaster::predict_many(const Eigen::Ref<const Eigen::MatrixXd>& stacked,
                                         Eigen::Index count) const {
    const int w = window();
    if (count < 0 || stacked.rows() != count * w) {
        throw DataError("predict_many: expected " + std::to_string(count) + " windows of " +
                        std::to_string(w) + " rows, got " + std::to_string(stacked.rows()) +
                        " rows");
    }
    if (stacked.cols() != dim()) {
        throw DataError("predict_many: input has " + std::to_string(stacked.cols()) +
                        " columns, model expects " + std::to_string(dim()));
    }
    Eigen::MatrixXd out(count, dim());
    for (Eigen::Index i = 0; i < count; ++i) {
        out.row(i) = predict_one(stacked.middleRows(i * w, w));
    }
    return out;
}

}  // namespace scorecast
