#include "lgvf/vector_field.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "lgvf/rng.hpp"

namespace lgvf {

VectorFieldParams VectorFieldParams::zeros_like(const VectorFieldParams& p) {
    VectorFieldParams z;
    z.w1 = Eigen::MatrixXd::Zero(p.w1.rows(), p.w1.cols());
    z.w2 = Eigen::MatrixXd::Zero(p.w2.rows(), p.w2.cols());
    z.w3 = Eigen::MatrixXd::Zero(p.w3.rows(), p.w3.cols());
    z.b1 = Eigen::VectorXd::Zero(p.b1.size());
    z.b2 = Eigen::VectorXd::Zero(p.b2.size());
    z.b3 = Eigen::VectorXd::Zero(p.b3.size());
    z.seed = p.seed;
    return z;
}

void VectorFieldParams::set_zero() {
    w1.setZero();
    w2.setZero();
    w3.setZero();
    b1.setZero();
    b2.setZero();
    b3.setZero();
}

bool VectorFieldParams::all_finite() const {
    return w1.allFinite() && w2.allFinite() && w3.allFinite() && b1.allFinite() && b2.allFinite() &&
           b3.allFinite();
}

VectorFieldParams init_params(std::uint64_t seed, int d, int h) {
    if (d < 1 || h < 1) throw std::invalid_argument("init_params: d and h must be >= 1");
    auto engine = make_engine(seed, Stream::param_init);
    auto glorot = [&engine](Eigen::Index rows, Eigen::Index cols) {
        const double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
        std::uniform_real_distribution<double> uni(-s, s);
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = uni(engine);
        return w;
    };
    VectorFieldParams p;
    p.w1 = glorot(h, d + 1);
    p.w2 = glorot(h, h);
    p.w3 = glorot(d, h);
    p.b1 = Eigen::VectorXd::Zero(h);
    p.b2 = Eigen::VectorXd::Zero(h);
    p.b3 = Eigen::VectorXd::Zero(d);
    p.seed = seed;
    return p;
}

void forward(const VectorFieldParams& p, const Eigen::VectorXd& x, double t, ForwardTrace& trace) {
    const int d = p.input_dim();
    if (static_cast<int>(x.size()) != d) {
        throw std::invalid_argument("forward: input dimension mismatch");
    }
    if (!x.allFinite() || !std::isfinite(t)) {
        throw std::invalid_argument("forward: non-finite input");
    }
    trace.input.resize(d + 1);
    trace.input.head(d) = x;
    trace.input(d) = t;
    trace.z1.noalias() = p.w1 * trace.input;
    trace.z1 += p.b1;
    trace.a1 = trace.z1.cwiseMax(0.0);
    trace.z2.noalias() = p.w2 * trace.a1;
    trace.z2 += p.b2;
    trace.a2 = trace.z2.cwiseMax(0.0);
    trace.value.noalias() = p.w3 * trace.a2;
    trace.value += p.b3;
}

Eigen::VectorXd forward_value(const VectorFieldParams& p, const Eigen::VectorXd& x, double t) {
    ForwardTrace trace;
    forward(p, x, t, trace);
    return trace.value;
}

void backward(const VectorFieldParams& p, const ForwardTrace& trace, const Eigen::VectorXd& upstream,
              VectorFieldParams& param_grads, Eigen::VectorXd& input_grad) {
    if (upstream.size() != p.w3.rows()) throw std::invalid_argument("backward: upstream shape mismatch");
    if (trace.a2.size() != p.w3.cols()) throw std::invalid_argument("backward: trace shape mismatch");

    param_grads.w3.noalias() += upstream * trace.a2.transpose();
    param_grads.b3 += upstream;

    Eigen::VectorXd dz2 = p.w3.transpose() * upstream;
    // relu'(z) with derivative 0 at exactly 0
    dz2 = (trace.z2.array() > 0.0).select(dz2, 0.0);

    param_grads.w2.noalias() += dz2 * trace.a1.transpose();
    param_grads.b2 += dz2;

    Eigen::VectorXd dz1 = p.w2.transpose() * dz2;
    dz1 = (trace.z1.array() > 0.0).select(dz1, 0.0);

    param_grads.w1.noalias() += dz1 * trace.input.transpose();
    param_grads.b1 += dz1;

    input_grad.noalias() = p.w1.transpose() * dz1;
}

void forward_batch(const VectorFieldParams& p, const Eigen::MatrixXd& x, const Eigen::VectorXd& t,
                   BatchTrace& trace) {
    const int d = p.input_dim();
    const Eigen::Index n = x.rows();
    if (static_cast<int>(x.cols()) != d || t.size() != n) {
        throw std::invalid_argument("forward_batch: shape mismatch");
    }
    trace.input.resize(n, d + 1);
    trace.input.leftCols(d) = x;
    trace.input.col(d) = t;
    trace.z1.noalias() = trace.input * p.w1.transpose();
    trace.z1.rowwise() += p.b1.transpose();
    trace.a1 = trace.z1.cwiseMax(0.0);
    trace.z2.noalias() = trace.a1 * p.w2.transpose();
    trace.z2.rowwise() += p.b2.transpose();
    trace.a2 = trace.z2.cwiseMax(0.0);
    trace.value.noalias() = trace.a2 * p.w3.transpose();
    trace.value.rowwise() += p.b3.transpose();
}

void backward_batch(const VectorFieldParams& p, const BatchTrace& trace, const Eigen::MatrixXd& upstream,
                    VectorFieldParams& param_grads) {
    if (upstream.rows() != trace.input.rows() || upstream.cols() != p.w3.rows()) {
        throw std::invalid_argument("backward_batch: upstream shape mismatch");
    }
    param_grads.w3.noalias() += upstream.transpose() * trace.a2;
    param_grads.b3 += upstream.colwise().sum().transpose();

    Eigen::MatrixXd dz2 = upstream * p.w3;
    dz2 = (trace.z2.array() > 0.0).select(dz2, 0.0);
    param_grads.w2.noalias() += dz2.transpose() * trace.a1;
    param_grads.b2 += dz2.colwise().sum().transpose();

    Eigen::MatrixXd dz1 = dz2 * p.w2;
    dz1 = (trace.z1.array() > 0.0).select(dz1, 0.0);
    param_grads.w1.noalias() += dz1.transpose() * trace.input;
    param_grads.b1 += dz1.colwise().sum().transpose();
}

namespace {

nlohmann::json layer_to_json(const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
    nlohmann::json layer;
    layer["rows"] = w.rows();
    layer["cols"] = w.cols();
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) weights.push_back(w(r, c));
    layer["weights"] = weights;
    layer["bias"] = std::vector<double>(b.data(), b.data() + b.size());
    return layer;
}

void layer_from_json(const nlohmann::json& layer, Eigen::MatrixXd& w, Eigen::VectorXd& b) {
    const Eigen::Index rows = layer.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = layer.at("cols").get<Eigen::Index>();
    const auto weights = layer.at("weights").get<std::vector<double>>();
    const auto bias = layer.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(weights.size()) != rows * cols ||
        static_cast<Eigen::Index>(bias.size()) != rows) {
        throw std::invalid_argument("checkpoint: layer size mismatch");
    }
    w.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = weights[static_cast<std::size_t>(r * cols + c)];
    b = Eigen::Map<const Eigen::VectorXd>(bias.data(), rows);
}

}  // namespace

nlohmann::json params_to_json(const VectorFieldParams& p) {
    nlohmann::json j;
    j["d"] = p.input_dim();
    j["h"] = p.hidden_width();
    j["seed"] = p.seed;
    j["layers"] = nlohmann::json::array(
        {layer_to_json(p.w1, p.b1), layer_to_json(p.w2, p.b2), layer_to_json(p.w3, p.b3)});
    return j;
}

VectorFieldParams params_from_json(const nlohmann::json& j) {
    VectorFieldParams p;
    const auto& layers = j.at("layers");
    if (!layers.is_array() || layers.size() != 3) {
        throw std::invalid_argument("checkpoint: expected exactly 3 layers");
    }
    layer_from_json(layers[0], p.w1, p.b1);
    layer_from_json(layers[1], p.w2, p.b2);
    layer_from_json(layers[2], p.w3, p.b3);
    p.seed = j.value("seed", std::uint64_t{0});
    const int d = j.at("d").get<int>();
    const int h = j.at("h").get<int>();
    if (p.w1.rows() != h || p.w1.cols() != d + 1 || p.w2.rows() != h || p.w2.cols() != h ||
        p.w3.rows() != d || p.w3.cols() != h) {
        throw std::invalid_argument("checkpoint: layer shapes do not chain (d+1)->h->h->d");
    }
    return p;
}

void save_checkpoint(const VectorFieldParams& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    out << params_to_json(p).dump(2) << "\n";
}

VectorFieldParams load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    nlohmann::json j;
    in >> j;
    return params_from_json(j);
}

}  // namespace lgvf
