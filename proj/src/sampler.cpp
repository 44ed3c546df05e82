#include "lgvf/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "lgvf/rng.hpp"

namespace lgvf {

void SampleConfig::validate() const {
    if (steps < 1) throw std::invalid_argument("sample config: steps must be >= 1");
    if (!(0.0 <= t0 && t0 < 1.0)) throw std::invalid_argument("sample config: t0 must be in [0,1)");
    if (eta_max < 0.0) throw std::invalid_argument("sample config: eta_max must be >= 0");
    if (n_samples < 1) throw std::invalid_argument("sample config: n_samples must be >= 1");
}

double eta_schedule(double t, double eta_max, double t0) {
    if (t <= t0) return 0.0;
    const double ramp = (t - t0) / (1.0 - t0);
    return eta_max * ramp * ramp;
}

namespace {

// Core Euler loop. Writes x_k into traj (if non-null) and leaves the final
// state in x. The adjustment is skipped entirely when eta is exactly zero so
// that the unadjusted path is reproduced bitwise.
void integrate_core(const VectorFieldParams& p, const Constraint* constraint, int steps,
                    double eta_max, double t0, Eigen::VectorXd& x, Eigen::MatrixXd* traj_states,
                    ForwardTrace& trace) {
    const double dt = 1.0 / static_cast<double>(steps);
    if (traj_states != nullptr) traj_states->row(0) = x.transpose();
    Eigen::VectorXd v;
    for (int k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(steps);
        forward(p, x, t, trace);
        v = trace.value;
        if (constraint != nullptr && t > t0) {
            const double eta = eta_schedule(t, eta_max, t0);
            if (eta > 0.0) v -= eta * constraint->violation_gradient(x);
        }
        x += dt * v;
        if (!x.allFinite()) {
            throw std::runtime_error("sampling diverged to a non-finite state at step " +
                                     std::to_string(k + 1));
        }
        if (traj_states != nullptr) traj_states->row(k + 1) = x.transpose();
    }
}

Eigen::VectorXd draw_start(int d, std::uint64_t seed, std::uint64_t item) {
    auto engine = make_engine(seed, Stream::sampling, item);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = normal(engine);
    return x;
}

}  // namespace

SampleResult sample(const VectorFieldParams& p, const Constraint* constraint, const SampleConfig& cfg) {
    cfg.validate();
    const int d = p.input_dim();
    if (constraint != nullptr && constraint->dim() != d) {
        throw std::invalid_argument("sample: constraint dimension " + std::to_string(constraint->dim()) +
                                    " does not match model dimension " + std::to_string(d));
    }
    SampleResult result;
    result.samples.resize(cfg.n_samples, d);
    if (cfg.record_trajectories) result.trajectories.reserve(static_cast<std::size_t>(cfg.n_samples));

    ForwardTrace trace;
    for (int i = 0; i < cfg.n_samples; ++i) {
        Eigen::VectorXd x = draw_start(d, cfg.seed, static_cast<std::uint64_t>(i));
        Eigen::MatrixXd* states = nullptr;
        Trajectory traj;
        if (cfg.record_trajectories) {
            traj.steps = cfg.steps;
            traj.states.resize(cfg.steps + 1, d);
            states = &traj.states;
        }
        integrate_core(p, constraint, cfg.steps, cfg.eta_max, cfg.t0, x, states, trace);
        result.samples.row(i) = x.transpose();
        if (cfg.record_trajectories) result.trajectories.push_back(std::move(traj));
    }
    return result;
}

Trajectory integrate_from(const VectorFieldParams& p, const Constraint* constraint,
                          const SampleConfig& cfg, const Eigen::VectorXd& x0, bool adjusted) {
    cfg.validate();
    Trajectory traj;
    traj.steps = cfg.steps;
    traj.states.resize(cfg.steps + 1, p.input_dim());
    Eigen::VectorXd x = x0;
    ForwardTrace trace;
    integrate_core(p, adjusted ? constraint : nullptr, cfg.steps, cfg.eta_max, cfg.t0, x,
                   &traj.states, trace);
    return traj;
}

TrajectoryPair integrate_pair_from(const VectorFieldParams& p, const Constraint& constraint,
                                   const SampleConfig& cfg, const Eigen::VectorXd& x0) {
    TrajectoryPair pair;
    pair.base = integrate_from(p, &constraint, cfg, x0, false);
    pair.adjusted = integrate_from(p, &constraint, cfg, x0, true);
    return pair;
}

TrajectoryPair integrate_pair(const VectorFieldParams& p, const Constraint& constraint,
                              const SampleConfig& cfg, std::uint64_t item) {
    cfg.validate();
    return integrate_pair_from(p, constraint, cfg, draw_start(p.input_dim(), cfg.seed, item));
}

}  // namespace lgvf
