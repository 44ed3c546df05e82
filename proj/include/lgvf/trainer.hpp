#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lgvf/constraint.hpp"
#include "lgvf/distributions.hpp"
#include "lgvf/vector_field.hpp"

namespace lgvf {

// How the training-time logic penalty is attached to the model.
//  - interpolant: penalize the straight-line interpolant x_t itself; the
//    penalty value is recorded but its parameter gradient is identically
//    zero, since x_t does not depend on the weights.
//  - endpoint_predictive: penalize the model-predicted endpoint
//    x1_hat = x_t + (1-t) v(x_t,t), which gives the penalty a gradient and
//    is the default everywhere.
enum class LogicMode { interpolant, endpoint_predictive };

LogicMode logic_mode_from_string(const std::string& s);
std::string to_string(LogicMode mode);

struct TrainConfig {
    double lambda_max = 0.0;
    double alpha = 1.0;
    double learning_rate = 3e-3;
    int batch_size = 256;
    int iterations = 8000;
    LogicMode logic_mode = LogicMode::endpoint_predictive;
    std::uint64_t seed = 0;
    int hidden_width = 128;

    void validate() const;
};

struct AdamState {
    VectorFieldParams m;
    VectorFieldParams v;
    long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState init(const VectorFieldParams& shape);
};

// One minibatch of the conditional path: x_t = (1-t) x0 + t x1, u = x1 - x0.
struct TrainingBatch {
    Eigen::MatrixXd x0, x1, xt, ut;  // B x d
    Eigen::VectorXd t;               // B
};

// lambda(t) = lambda_max * t^alpha
double lambda_schedule(double t, double lambda_max, double alpha);

TrainingBatch make_batch(const GaussianMixture& target, int batch_size, std::mt19937_64& engine);

struct LossAndGrads {
    double loss = 0.0;
    VectorFieldParams grads;
};

// mean_i || v(xt_i, t_i) - u_i ||^2 and its exact parameter gradient.
LossAndGrads flow_matching_loss_and_grads(const VectorFieldParams& p, const TrainingBatch& batch);
double flow_matching_loss(const VectorFieldParams& p, const TrainingBatch& batch);

// mean_i lambda(t_i) * violation(...) per the configured LogicMode.
LossAndGrads logic_loss_and_grads(const VectorFieldParams& p, const TrainingBatch& batch,
                                  const Constraint& constraint, const TrainConfig& cfg);

// Bias-corrected Adam update; throws on non-finite gradients or parameters.
void adam_step(AdamState& state, VectorFieldParams& p, const VectorFieldParams& grads, double lr);

struct TrainRecord {
    double loss_fm = 0.0;
    double loss_logic = 0.0;
};

struct TrainResult {
    VectorFieldParams params;
    std::vector<TrainRecord> history;
};

// Runs the full training loop: fresh x1 ~ target, x0 ~ N(0,I), t ~ U[0,1]
// each iteration, combined loss, one Adam step. Deterministic in cfg.seed.
TrainResult train(const TrainConfig& cfg, const GaussianMixture& target,
                  const Constraint* constraint);

}  // namespace lgvf
