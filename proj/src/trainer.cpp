#include "lgvf/trainer.hpp"

#include <cmath>
#include <stdexcept>

#include "lgvf/rng.hpp"

namespace lgvf {

LogicMode logic_mode_from_string(const std::string& s) {
    if (s == "interpolant") return LogicMode::interpolant;
    if (s == "endpoint_predictive") return LogicMode::endpoint_predictive;
    throw std::invalid_argument("unknown logic_mode '" + s + "'");
}

std::string to_string(LogicMode mode) {
    return mode == LogicMode::interpolant ? "interpolant" : "endpoint_predictive";
}

void TrainConfig::validate() const {
    if (batch_size < 1) throw std::invalid_argument("train config: batch_size must be >= 1");
    if (iterations < 1) throw std::invalid_argument("train config: iterations must be >= 1");
    if (lambda_max < 0.0) throw std::invalid_argument("train config: lambda_max must be >= 0");
    if (alpha <= 0.0) throw std::invalid_argument("train config: alpha must be > 0");
    if (hidden_width < 1) throw std::invalid_argument("train config: hidden_width must be >= 1");
}

AdamState AdamState::init(const VectorFieldParams& shape) {
    AdamState s;
    s.m = VectorFieldParams::zeros_like(shape);
    s.v = VectorFieldParams::zeros_like(shape);
    return s;
}

double lambda_schedule(double t, double lambda_max, double alpha) {
    return lambda_max * std::pow(t, alpha);
}

namespace {

void fill_batch(const GaussianMixture& target, int batch_size, std::mt19937_64& engine,
                TrainingBatch& batch) {
    const int d = target.dim();
    batch.x1.resize(batch_size, d);
    batch.x0.resize(batch_size, d);
    batch.t.resize(batch_size);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < batch_size; ++i) batch.x1.row(i) = target.draw(engine).transpose();
    for (int i = 0; i < batch_size; ++i)
        for (int j = 0; j < d; ++j) batch.x0(i, j) = normal(engine);
    for (int i = 0; i < batch_size; ++i) batch.t(i) = unit(engine);

    batch.xt = ((1.0 - batch.t.array()).matrix().asDiagonal() * batch.x0) +
               (batch.t.asDiagonal() * batch.x1);
    batch.ut = batch.x1 - batch.x0;
}

// Adds the endpoint-predictive penalty's upstream contribution and returns
// the penalty value. upstream rows accumulate (1-t) lambda(t) grad_l / B.
double accumulate_endpoint_penalty(const VectorFieldParams& p, const TrainingBatch& batch,
                                   const Constraint& constraint, const TrainConfig& cfg,
                                   const Eigen::MatrixXd& value, Eigen::MatrixXd& upstream) {
    const int n = static_cast<int>(batch.t.size());
    const double inv_n = 1.0 / static_cast<double>(n);
    double loss = 0.0;
    Eigen::VectorXd endpoint(p.input_dim());
    for (int i = 0; i < n; ++i) {
        const double t = batch.t(i);
        const double lam = lambda_schedule(t, cfg.lambda_max, cfg.alpha);
        endpoint = batch.xt.row(i).transpose() + (1.0 - t) * value.row(i).transpose();
        const double viol = constraint.violation(endpoint);
        loss += lam * viol * inv_n;
        if (viol > 0.0 && lam > 0.0) {
            upstream.row(i) +=
                ((1.0 - t) * lam * inv_n) * constraint.violation_gradient(endpoint).transpose();
        }
    }
    return loss;
}

double interpolant_penalty(const TrainingBatch& batch, const Constraint& constraint,
                           const TrainConfig& cfg) {
    const int n = static_cast<int>(batch.t.size());
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        loss += lambda_schedule(batch.t(i), cfg.lambda_max, cfg.alpha) *
                constraint.violation(batch.xt.row(i).transpose());
    }
    return loss / static_cast<double>(n);
}

}  // namespace

TrainingBatch make_batch(const GaussianMixture& target, int batch_size, std::mt19937_64& engine) {
    TrainingBatch batch;
    fill_batch(target, batch_size, engine, batch);
    return batch;
}

double flow_matching_loss(const VectorFieldParams& p, const TrainingBatch& batch) {
    BatchTrace trace;
    forward_batch(p, batch.xt, batch.t, trace);
    return (trace.value - batch.ut).squaredNorm() / static_cast<double>(batch.t.size());
}

LossAndGrads flow_matching_loss_and_grads(const VectorFieldParams& p, const TrainingBatch& batch) {
    BatchTrace trace;
    forward_batch(p, batch.xt, batch.t, trace);
    const double inv_n = 1.0 / static_cast<double>(batch.t.size());
    const Eigen::MatrixXd residual = trace.value - batch.ut;
    LossAndGrads out;
    out.loss = residual.squaredNorm() * inv_n;
    if (!std::isfinite(out.loss)) throw std::runtime_error("flow matching loss is not finite");
    out.grads = VectorFieldParams::zeros_like(p);
    backward_batch(p, trace, (2.0 * inv_n) * residual, out.grads);
    return out;
}

LossAndGrads logic_loss_and_grads(const VectorFieldParams& p, const TrainingBatch& batch,
                                  const Constraint& constraint, const TrainConfig& cfg) {
    LossAndGrads out;
    out.grads = VectorFieldParams::zeros_like(p);
    if (cfg.lambda_max == 0.0) return out;
    if (cfg.logic_mode == LogicMode::interpolant) {
        out.loss = interpolant_penalty(batch, constraint, cfg);
        return out;
    }
    BatchTrace trace;
    forward_batch(p, batch.xt, batch.t, trace);
    Eigen::MatrixXd upstream = Eigen::MatrixXd::Zero(batch.xt.rows(), batch.xt.cols());
    out.loss = accumulate_endpoint_penalty(p, batch, constraint, cfg, trace.value, upstream);
    backward_batch(p, trace, upstream, out.grads);
    return out;
}

void adam_step(AdamState& state, VectorFieldParams& p, const VectorFieldParams& grads, double lr) {
    if (!grads.all_finite()) throw std::runtime_error("adam_step: non-finite gradients");
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    auto update = [&](Eigen::Ref<Eigen::MatrixXd> param, Eigen::Ref<Eigen::MatrixXd> m,
                      Eigen::Ref<Eigen::MatrixXd> v, const Eigen::MatrixXd& g) {
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
        param -= (lr / bc1) * m.cwiseQuotient(((v / bc2).cwiseSqrt().array() + state.epsilon).matrix());
    };
    update(p.w1, state.m.w1, state.v.w1, grads.w1);
    update(p.w2, state.m.w2, state.v.w2, grads.w2);
    update(p.w3, state.m.w3, state.v.w3, grads.w3);
    update(p.b1, state.m.b1, state.v.b1, grads.b1);
    update(p.b2, state.m.b2, state.v.b2, grads.b2);
    update(p.b3, state.m.b3, state.v.b3, grads.b3);
    if (!p.all_finite()) throw std::runtime_error("adam_step: parameters became non-finite");
}

TrainResult train(const TrainConfig& cfg, const GaussianMixture& target, const Constraint* constraint) {
    cfg.validate();
    if (constraint != nullptr && constraint->dim() != target.dim()) {
        throw std::invalid_argument("train: constraint dimension " + std::to_string(constraint->dim()) +
                                    " does not match target dimension " + std::to_string(target.dim()));
    }
    TrainResult result;
    result.params = init_params(cfg.seed, target.dim(), cfg.hidden_width);
    result.history.reserve(static_cast<std::size_t>(cfg.iterations));

    AdamState adam = AdamState::init(result.params);
    auto grads = VectorFieldParams::zeros_like(result.params);
    auto engine = make_engine(cfg.seed, Stream::training);
    TrainingBatch batch;
    BatchTrace trace;
    Eigen::MatrixXd upstream;

    const bool use_penalty = constraint != nullptr && cfg.lambda_max > 0.0;
    const double inv_n = 1.0 / static_cast<double>(cfg.batch_size);

    for (int iter = 0; iter < cfg.iterations; ++iter) {
        fill_batch(target, cfg.batch_size, engine, batch);
        forward_batch(result.params, batch.xt, batch.t, trace);

        upstream = (2.0 * inv_n) * (trace.value - batch.ut);
        const double loss_fm = (trace.value - batch.ut).squaredNorm() * inv_n;

        double loss_logic = 0.0;
        if (use_penalty) {
            if (cfg.logic_mode == LogicMode::interpolant) {
                loss_logic = interpolant_penalty(batch, *constraint, cfg);
            } else {
                loss_logic = accumulate_endpoint_penalty(result.params, batch, *constraint, cfg,
                                                         trace.value, upstream);
            }
        }
        if (!std::isfinite(loss_fm) || !std::isfinite(loss_logic)) {
            throw std::runtime_error("train: loss diverged at iteration " + std::to_string(iter));
        }

        grads.set_zero();
        backward_batch(result.params, trace, upstream, grads);
        try {
            adam_step(adam, result.params, grads, cfg.learning_rate);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("train: " + std::string(e.what()) + " at iteration " +
                                     std::to_string(iter));
        }
        result.history.push_back({loss_fm, loss_logic});
    }
    return result;
}

}  // namespace lgvf
