#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>

#include "json.hpp"

namespace lgvf {

/**
 * Weights of the time-conditioned vector field v(x,t): a fixed 3-layer ReLU
 * MLP mapping [x;t] in R^(d+1) through two hidden layers of width h to R^d.
 * Gradients are computed by the hand-written reverse pass below; the same
 * struct doubles as the gradient/Adam-moment container since shapes match.
 */
struct VectorFieldParams {
    Eigen::MatrixXd w1;  // h x (d+1)
    Eigen::MatrixXd w2;  // h x h
    Eigen::MatrixXd w3;  // d x h
    Eigen::VectorXd b1, b2, b3;
    std::uint64_t seed = 0;

    int input_dim() const { return static_cast<int>(w3.rows()); }
    int hidden_width() const { return static_cast<int>(w1.rows()); }

    static VectorFieldParams zeros_like(const VectorFieldParams& p);
    void set_zero();
    bool all_finite() const;
};

// Cached intermediates of one forward pass, consumed by the reverse pass.
// Reusable across calls to avoid reallocation in integration loops.
struct ForwardTrace {
    Eigen::VectorXd input;  // [x;t]
    Eigen::VectorXd z1, a1, z2, a2;
    Eigen::VectorXd value;  // v(x,t)
};

// Batched counterpart, row-major over the batch.
struct BatchTrace {
    Eigen::MatrixXd input;  // B x (d+1)
    Eigen::MatrixXd z1, a1, z2, a2;
    Eigen::MatrixXd value;  // B x d
};

// Glorot-uniform weights (b = 0), deterministic in seed.
VectorFieldParams init_params(std::uint64_t seed, int d, int h);

// v = w3*relu(w2*relu(w1*[x;t]+b1)+b2)+b3. Throws on non-finite input.
void forward(const VectorFieldParams& p, const Eigen::VectorXd& x, double t, ForwardTrace& trace);
Eigen::VectorXd forward_value(const VectorFieldParams& p, const Eigen::VectorXd& x, double t);

// Exact reverse-mode gradients of upstream . v with respect to all parameters
// (accumulated into param_grads) and the input [x;t] (written to input_grad).
// ReLU derivative at a pre-activation of exactly 0 is 0.
void backward(const VectorFieldParams& p, const ForwardTrace& trace, const Eigen::VectorXd& upstream,
              VectorFieldParams& param_grads, Eigen::VectorXd& input_grad);

void forward_batch(const VectorFieldParams& p, const Eigen::MatrixXd& x,
                   const Eigen::VectorXd& t, BatchTrace& trace);

// Accumulates the sum over batch rows of each row's parameter gradient.
void backward_batch(const VectorFieldParams& p, const BatchTrace& trace,
                    const Eigen::MatrixXd& upstream, VectorFieldParams& param_grads);

// Checkpoint schema: {d, h, seed, layers:[{rows, cols, weights, bias}]} with
// row-major weights; numeric round-trip is exact.
nlohmann::json params_to_json(const VectorFieldParams& p);
VectorFieldParams params_from_json(const nlohmann::json& j);
void save_checkpoint(const VectorFieldParams& p, const std::string& path);
VectorFieldParams load_checkpoint(const std::string& path);

}  // namespace lgvf
