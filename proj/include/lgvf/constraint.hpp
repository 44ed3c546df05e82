#pragma once

#include <Eigen/Core>

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace lgvf {

/**
 * A logical constraint over R^d together with its differentiable hinge
 * relaxation. violation(x) >= 0 everywhere and violation(x) == 0 exactly on
 * the feasible set; violation_gradient is the analytic (sub)gradient.
 *
 * Subgradient conventions at the non-smooth points:
 *  - on the hinge boundary (violation exactly 0) the gradient is the zero
 *    vector, so feasible points are never perturbed;
 *  - at a ball center (direction undefined) the gradient is the zero vector.
 *
 * Constraints are immutable after construction; all operations are pure.
 */
class Constraint {
public:
    static Constraint half_space(Eigen::VectorXd a, double b);
    static Constraint outside_ball(Eigen::VectorXd center, double radius);
    static Constraint inside_ball(Eigen::VectorXd center, double radius);
    static Constraint annulus(Eigen::VectorXd center, double r_min, double r_max);
    static Constraint all_of(std::vector<Constraint> children);

    // Parses the config-schema node, e.g.
    //   {"type":"halfspace","a":[1,1],"b":0}
    //   {"type":"all_of","children":[...]}
    // Throws std::invalid_argument with a descriptive message on malformed
    // input or invariant violations (unknown type, r_min >= r_max, ...).
    static Constraint from_json(const nlohmann::json& spec);

    int dim() const { return dim_; }

    // Hinge violation magnitude; >= 0, zero iff the point is feasible.
    double violation(const Eigen::VectorXd& x) const;

    // Analytic (sub)gradient of violation(). Sum over children for all_of.
    Eigen::VectorXd violation_gradient(const Eigen::VectorXd& x) const;

    bool is_satisfied(const Eigen::VectorXd& x, double tol = 0.0) const;

    bool is_conjunction() const;
    const std::vector<Constraint>& children() const;

private:
    struct HalfSpace {
        Eigen::VectorXd a;
        double b;
    };
    struct OutsideBall {
        Eigen::VectorXd center;
        double radius;
    };
    struct InsideBall {
        Eigen::VectorXd center;
        double radius;
    };
    struct Annulus {
        Eigen::VectorXd center;
        double r_min;
        double r_max;
    };
    struct Conjunction {
        std::vector<Constraint> children;
    };
    using Node = std::variant<HalfSpace, OutsideBall, InsideBall, Annulus, Conjunction>;

    Constraint(Node node, int dim) : node_(std::make_shared<Node>(std::move(node))), dim_(dim) {}

    void check_dim(const Eigen::VectorXd& x) const;

    std::shared_ptr<const Node> node_;
    int dim_ = 0;
};

}  // namespace lgvf
