#include "scorecast/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scorecast/errors.hpp"
#include "scorecast/lstm.hpp"
#include "scorecast/ridge.hpp"
#include "scorecast/scaled.hpp"

namespace scorecast {

namespace {

std::string next_token(std::istream& in, const char* what) {
    std::string token;
    if (!(in >> token)) {
        throw DataError(std::string("checkpoint: unexpected end of file, expected ") + what);
    }
    return token;
}

void expect_token(std::istream& in, const std::string& want) {
    const std::string got = next_token(in, want.c_str());
    if (got != want) {
        throw DataError("checkpoint: expected '" + want + "', found '" + got + "'");
    }
}

long long read_int(std::istream& in, const char* what) {
    const std::string token = next_token(in, what);
    char* end = nullptr;
    const long long value = std::strtoll(token.c_str(), &end, 10);
    if (end == nullptr || *end != '\0') {
        throw DataError(std::string("checkpoint: bad integer for ") + what + ": '" + token + "'");
    }
    return value;
}

// Parses a double written as a C hexfloat (or any strtod-accepted literal).
double read_double(std::istream& in, const char* what) {
    const std::string token = next_token(in, what);
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end == nullptr || *end != '\0') {
        throw DataError(std::string("checkpoint: bad number for ") + what + ": '" + token + "'");
    }
    return value;
}

std::unique_ptr<Forecaster> read_lstm(std::istream& in) {
    expect_token(in, "dim");
    const auto dim = static_cast<Eigen::Index>(read_int(in, "dim"));
    expect_token(in, "hidden");
    const auto hidden = static_cast<int>(read_int(in, "hidden"));
    expect_token(in, "window");
    const auto window = static_cast<int>(read_int(in, "window"));
    expect_token(in, "params");
    const auto count = static_cast<Eigen::Index>(read_int(in, "params"));

    auto net = std::make_unique<LstmNet>(dim, hidden, Window(window));
    if (count != net->params().size()) {
        throw DataError("checkpoint: lstm parameter count " + std::to_string(count) +
                        " does not match shape (expected " +
                        std::to_string(net->params().size()) + ")");
    }
    for (Eigen::Index i = 0; i < count; ++i) {
        net->params()[i] = read_double(in, "parameter");
    }
    return net;
}

std::unique_ptr<Forecaster> read_ridge(std::istream& in) {
    expect_token(in, "dim");
    const auto dim = static_cast<Eigen::Index>(read_int(in, "dim"));
    expect_token(in, "window");
    const auto window = static_cast<int>(read_int(in, "window"));
    expect_token(in, "lambda");
    const double lambda = read_double(in, "lambda");
    expect_token(in, "weights");
    const auto rows = static_cast<Eigen::Index>(read_int(in, "weight rows"));
    const auto cols = static_cast<Eigen::Index>(read_int(in, "weight cols"));
    Eigen::MatrixXd weights(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            weights(r, c) = read_double(in, "weight");
        }
    }
    return std::make_unique<RidgeAr>(dim, Window(window), lambda, std::move(weights));
}

// Reads one model body given its already-consumed kind tag; recursive so
// wrapper kinds can contain a nested model.
std::unique_ptr<Forecaster> read_model(std::istream& in, const std::string& kind) {
    if (kind == "lstm") {
        return read_lstm(in);
    }
    if (kind == "ridge") {
        return read_ridge(in);
    }
    if (kind == "scaled") {
        expect_token(in, "norm");
        NormStats norm = read_norm_stats(in);
        const std::string inner = next_token(in, "model kind");
        return std::make_unique<ScaledForecaster>(read_model(in, inner), std::move(norm));
    }
    throw DataError("checkpoint: unknown model kind '" + kind + "'");
}

}  // namespace

void write_norm_stats(std::ostream& out, const NormStats& norm) {
    out << "norm " << norm.dim() << "\n";
    char buf[48];
    for (const auto* vec : {&norm.mean, &norm.std, &norm.scale}) {
        for (Eigen::Index j = 0; j < vec->size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%a", (*vec)[j]);
            out << buf << (j + 1 == vec->size() ? "\n" : " ");
        }
    }
}

NormStats read_norm_stats(std::istream& in) {
    const auto dim = static_cast<Eigen::Index>(read_int(in, "norm dim"));
    if (dim < 1) {
        throw DataError("checkpoint: norm block has dimension " + std::to_string(dim));
    }
    NormStats norm;
    norm.mean.resize(dim);
    norm.std.resize(dim);
    norm.scale.resize(dim);
    for (auto* vec : {&norm.mean, &norm.std, &norm.scale}) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            (*vec)[j] = read_double(in, "norm value");
        }
    }
    return norm;
}

void write_checkpoint(std::ostream& out, const Forecaster& model, const NormStats* norm) {
    out << "scorecast-checkpoint " << kCheckpointVersion << "\n";
    model.save(out);
    if (norm != nullptr) {
        write_norm_stats(out, *norm);
    }
    if (!out) {
        throw DataError("checkpoint: write failed");
    }
}

Checkpoint read_checkpoint(std::istream& in) {
    expect_token(in, "scorecast-checkpoint");
    const long long version = read_int(in, "format version");
    if (version != kCheckpointVersion) {
        throw DataError("checkpoint: unsupported format version " + std::to_string(version));
    }
    const std::string kind = next_token(in, "model kind");

    Checkpoint ckpt;
    ckpt.model = read_model(in, kind);

    std::string token;
    if (in >> token) {
        if (token != "norm") {
            throw DataError("checkpoint: unexpected trailing content '" + token + "'");
        }
        ckpt.norm = read_norm_stats(in);
        if (in >> token) {
            throw DataError("checkpoint: unexpected trailing content '" + token + "'");
        }
    }
    return ckpt;
}

void save_checkpoint(const std::string& path, const Forecaster& model, const NormStats* norm) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("checkpoint: cannot open '" + path + "' for writing");
    }
    write_checkpoint(out, model, norm);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("checkpoint: cannot open '" + path + "'");
    }
    return read_checkpoint(in);
}

}  // namespace scorecast
