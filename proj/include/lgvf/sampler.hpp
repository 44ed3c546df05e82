#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "lgvf/constraint.hpp"
#include "lgvf/vector_field.hpp"

namespace lgvf {

struct SampleConfig {
    int steps = 100;  // Euler steps K; grid t_k = k/K
    double eta_max = 0.0;
    double t0 = 0.3;
    int n_samples = 2000;
    std::uint64_t seed = 0;
    bool record_trajectories = false;

    void validate() const;
};

// 0 for t <= t0, then a quadratic ramp reaching eta_max at t = 1.
double eta_schedule(double t, double eta_max, double t0);

// States of one Euler integration, x_k at t_k = k/K for k = 0..K.
struct Trajectory {
    Eigen::MatrixXd states;  // (K+1) x d
    int steps = 0;

    double time_of(int k) const { return static_cast<double>(k) / static_cast<double>(steps); }
    Eigen::VectorXd state(int k) const { return states.row(k).transpose(); }
};

struct SampleResult {
    Eigen::MatrixXd samples;  // n x d
    std::vector<Trajectory> trajectories;
};

/**
 * Euler-integrates dx/dt = v(x,t) from x0 ~ N(0,I) over K steps; when a
 * constraint is present, v is replaced by v - eta(t) grad_violation(x) for
 * t past the threshold. Samples are integrated independently with
 * per-sample seed substreams, so results do not depend on batching order.
 * eta_max = 0 (or constraint == nullptr) reproduces plain sampling
 * bit-exactly. Throws on a non-finite state, naming the step.
 */
SampleResult sample(const VectorFieldParams& p, const Constraint* constraint, const SampleConfig& cfg);

// Single integration from an explicit start state. adjusted = false forces
// eta identically zero regardless of cfg.eta_max.
Trajectory integrate_from(const VectorFieldParams& p, const Constraint* constraint,
                          const SampleConfig& cfg, const Eigen::VectorXd& x0, bool adjusted);

struct TrajectoryPair {
    Trajectory base;      // eta = 0 throughout
    Trajectory adjusted;  // scheduled eta
};

// Two integrations from one shared x0 (drawn from the per-sample stream of
// `item`); the pre-threshold prefixes coincide bitwise.
TrajectoryPair integrate_pair(const VectorFieldParams& p, const Constraint& constraint,
                              const SampleConfig& cfg, std::uint64_t item = 0);
TrajectoryPair integrate_pair_from(const VectorFieldParams& p, const Constraint& constraint,
                                   const SampleConfig& cfg, const Eigen::VectorXd& x0);

}  // namespace lgvf
