#include "lgvf/constraint.hpp"

#include <cmath>
#include <stdexcept>

namespace lgvf {

namespace {

Eigen::VectorXd parse_vector(const nlohmann::json& node, const std::string& key) {
    if (!node.contains(key) || !node[key].is_array() || node[key].empty()) {
        throw std::invalid_argument("constraint: missing or malformed vector field '" + key + "'");
    }
    Eigen::VectorXd v(node[key].size());
    for (std::size_t i = 0; i < node[key].size(); ++i) {
        if (!node[key][i].is_number()) {
            throw std::invalid_argument("constraint: non-numeric entry in vector field '" + key + "'");
        }
        v(static_cast<Eigen::Index>(i)) = node[key][i].get<double>();
    }
    return v;
}

double parse_scalar(const nlohmann::json& node, const std::string& key) {
    if (!node.contains(key) || !node[key].is_number()) {
        throw std::invalid_argument("constraint: missing or malformed scalar field '" + key + "'");
    }
    return node[key].get<double>();
}

}  // namespace

Constraint Constraint::half_space(Eigen::VectorXd a, double b) {
    if (a.size() == 0 || a.norm() == 0.0) {
        throw std::invalid_argument("half_space: normal vector must be nonzero");
    }
    const int d = static_cast<int>(a.size());
    return Constraint(HalfSpace{std::move(a), b}, d);
}

Constraint Constraint::outside_ball(Eigen::VectorXd center, double radius) {
    if (center.size() == 0) throw std::invalid_argument("outside_ball: empty center");
    if (radius < 0.0) throw std::invalid_argument("outside_ball: radius must be >= 0");
    const int d = static_cast<int>(center.size());
    return Constraint(OutsideBall{std::move(center), radius}, d);
}

Constraint Constraint::inside_ball(Eigen::VectorXd center, double radius) {
    if (center.size() == 0) throw std::invalid_argument("inside_ball: empty center");
    if (radius < 0.0) throw std::invalid_argument("inside_ball: radius must be >= 0");
    const int d = static_cast<int>(center.size());
    return Constraint(InsideBall{std::move(center), radius}, d);
}

Constraint Constraint::annulus(Eigen::VectorXd center, double r_min, double r_max) {
    if (center.size() == 0) throw std::invalid_argument("annulus: empty center");
    if (!(0.0 < r_min && r_min < r_max)) {
        throw std::invalid_argument("annulus: requires 0 < r_min < r_max");
    }
    const int d = static_cast<int>(center.size());
    return Constraint(Annulus{std::move(center), r_min, r_max}, d);
}

Constraint Constraint::all_of(std::vector<Constraint> children) {
    if (children.empty()) throw std::invalid_argument("all_of: requires at least one child");
    const int d = children.front().dim();
    for (const Constraint& c : children) {
        if (c.dim() != d) throw std::invalid_argument("all_of: children disagree on dimension");
    }
    return Constraint(Conjunction{std::move(children)}, d);
}

Constraint Constraint::from_json(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string()) {
        throw std::invalid_argument("constraint: node must be an object with a string 'type'");
    }
    const std::string type = spec["type"].get<std::string>();
    if (type == "halfspace") {
        return half_space(parse_vector(spec, "a"), parse_scalar(spec, "b"));
    }
    if (type == "outside_ball") {
        return outside_ball(parse_vector(spec, "c"), parse_scalar(spec, "r"));
    }
    if (type == "inside_ball") {
        return inside_ball(parse_vector(spec, "c"), parse_scalar(spec, "r"));
    }
    if (type == "annulus") {
        return annulus(parse_vector(spec, "c"), parse_scalar(spec, "r_min"), parse_scalar(spec, "r_max"));
    }
    if (type == "all_of") {
        if (!spec.contains("children") || !spec["children"].is_array() || spec["children"].empty()) {
            throw std::invalid_argument("all_of: requires a non-empty 'children' array");
        }
        std::vector<Constraint> children;
        children.reserve(spec["children"].size());
        for (const auto& child : spec["children"]) children.push_back(from_json(child));
        return all_of(std::move(children));
    }
    throw std::invalid_argument("constraint: unknown type '" + type + "'");
}

void Constraint::check_dim(const Eigen::VectorXd& x) const {
    if (static_cast<int>(x.size()) != dim_) {
        throw std::invalid_argument("constraint: point has dimension " + std::to_string(x.size()) +
                                    ", constraint expects " + std::to_string(dim_));
    }
}

double Constraint::violation(const Eigen::VectorXd& x) const {
    check_dim(x);
    struct Visitor {
        const Eigen::VectorXd& x;
        double operator()(const HalfSpace& h) const { return std::max(0.0, h.b - h.a.dot(x)); }
        double operator()(const OutsideBall& o) const {
            return std::max(0.0, o.radius - (x - o.center).norm());
        }
        double operator()(const InsideBall& i) const {
            return std::max(0.0, (x - i.center).norm() - i.radius);
        }
        double operator()(const Annulus& a) const {
            const double r = (x - a.center).norm();
            return std::max(0.0, a.r_min - r) + std::max(0.0, r - a.r_max);
        }
        double operator()(const Conjunction& c) const {
            double total = 0.0;
            for (const Constraint& child : c.children) total += child.violation(x);
            return total;
        }
    };
    return std::visit(Visitor{x}, *node_);
}

Eigen::VectorXd Constraint::violation_gradient(const Eigen::VectorXd& x) const {
    check_dim(x);
    struct Visitor {
        const Eigen::VectorXd& x;
        Eigen::VectorXd operator()(const HalfSpace& h) const {
            if (h.b - h.a.dot(x) > 0.0) return -h.a;
            return Eigen::VectorXd::Zero(x.size());
        }
        Eigen::VectorXd operator()(const OutsideBall& o) const {
            const Eigen::VectorXd delta = x - o.center;
            const double r = delta.norm();
            if (r < o.radius && r > 0.0) return -delta / r;
            return Eigen::VectorXd::Zero(x.size());
        }
        Eigen::VectorXd operator()(const InsideBall& i) const {
            const Eigen::VectorXd delta = x - i.center;
            const double r = delta.norm();
            if (r > i.radius) return delta / r;
            return Eigen::VectorXd::Zero(x.size());
        }
        Eigen::VectorXd operator()(const Annulus& a) const {
            const Eigen::VectorXd delta = x - a.center;
            const double r = delta.norm();
            if (r > 0.0 && r < a.r_min) return -delta / r;
            if (r > a.r_max) return delta / r;
            return Eigen::VectorXd::Zero(x.size());
        }
        Eigen::VectorXd operator()(const Conjunction& c) const {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
            for (const Constraint& child : c.children) g += child.violation_gradient(x);
            return g;
        }
    };
    return std::visit(Visitor{x}, *node_);
}

bool Constraint::is_satisfied(const Eigen::VectorXd& x, double tol) const {
    return violation(x) <= tol;
}

bool Constraint::is_conjunction() const {
    return std::holds_alternative<Conjunction>(*node_);
}

const std::vector<Constraint>& Constraint::children() const {
    if (!is_conjunction()) throw std::logic_error("children(): constraint is not a conjunction");
    return std::get<Conjunction>(*node_).children;
}

}  // namespace lgvf
