#pragma once

// Shared helpers for the test suites: finite-difference oracles kept
// independent of the reverse-mode implementation they check, and a builder
// for networks that realize an exactly linear field v(x) = A x.

#include <Eigen/Core>

#include <functional>
#include <vector>

#include "lgvf/vector_field.hpp"

namespace lgvf::testsupport {

inline std::vector<double*> param_coeffs(VectorFieldParams& p) {
    std::vector<double*> out;
    out.reserve(static_cast<std::size_t>(p.w1.size() + p.w2.size() + p.w3.size() + p.b1.size() +
                                         p.b2.size() + p.b3.size()));
    for (auto* m : {&p.w1, &p.w2, &p.w3}) {
        for (Eigen::Index i = 0; i < m->size(); ++i) out.push_back(m->data() + i);
    }
    for (auto* v : {&p.b1, &p.b2, &p.b3}) {
        for (Eigen::Index i = 0; i < v->size(); ++i) out.push_back(v->data() + i);
    }
    return out;
}

// Central difference d f / d coeff over coefficient index idx of the
// enumeration above.
inline double fd_param_derivative(const VectorFieldParams& p, std::size_t idx,
                                  const std::function<double(const VectorFieldParams&)>& f,
                                  double step = 1e-6) {
    VectorFieldParams hi = p, lo = p;
    *param_coeffs(hi)[idx] += step;
    *param_coeffs(lo)[idx] -= step;
    return (f(hi) - f(lo)) / (2.0 * step);
}

inline bool close_rel(double analytic, double reference, double rel = 1e-5, double abs_floor = 1e-8) {
    const double diff = std::abs(analytic - reference);
    return diff <= abs_floor || diff <= rel * std::abs(reference);
}

// Builds params realizing v([x;t]) = A x exactly, using relu(s) - relu(-s) = s.
// Hidden width is 2d; the time input column is zeroed out.
inline VectorFieldParams linear_field_params(const Eigen::MatrixXd& a) {
    const int d = static_cast<int>(a.rows());
    const int h = 2 * d;
    VectorFieldParams p;
    p.w1 = Eigen::MatrixXd::Zero(h, d + 1);
    p.w1.topLeftCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
    p.w1.block(d, 0, d, d) = -Eigen::MatrixXd::Identity(d, d);
    p.w2 = Eigen::MatrixXd::Zero(h, h);
    p.w2.topLeftCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
    p.w2.topRightCorner(d, d) = -Eigen::MatrixXd::Identity(d, d);
    p.w2.bottomLeftCorner(d, d) = -Eigen::MatrixXd::Identity(d, d);
    p.w2.bottomRightCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
    p.w3 = Eigen::MatrixXd::Zero(d, h);
    p.w3.leftCols(d) = a;
    p.w3.rightCols(d) = -a;
    p.b1 = Eigen::VectorXd::Zero(h);
    p.b2 = Eigen::VectorXd::Zero(h);
    p.b3 = Eigen::VectorXd::Zero(d);
    return p;
}

}  // namespace lgvf::testsupport
