#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lgvf/constraint.hpp"
#include "lgvf/rng.hpp"

#include <cmath>
#include <random>
#include <vector>

using lgvf::Constraint;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

VectorXd vec2(double a, double b) {
    VectorXd v(2);
    v << a, b;
    return v;
}

// Central-difference oracle for the violation gradient, independent of the
// analytic path under test.
VectorXd fd_gradient(const Constraint& c, const VectorXd& x, double step = 1e-6) {
    VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        VectorXd hi = x, lo = x;
        hi(i) += step;
        lo(i) -= step;
        g(i) = (c.violation(hi) - c.violation(lo)) / (2.0 * step);
    }
    return g;
}

std::vector<Constraint> builtin_zoo() {
    std::vector<Constraint> zoo;
    zoo.push_back(Constraint::half_space(vec2(1, 1), 0.0));
    zoo.push_back(Constraint::outside_ball(vec2(0, 0.5), 1.2));
    zoo.push_back(Constraint::inside_ball(vec2(0.5, -0.25), 2.0));
    zoo.push_back(Constraint::annulus(vec2(0, 0), 1.5, 2.8));
    zoo.push_back(Constraint::all_of({Constraint::outside_ball(vec2(0, 0.5), 1.2),
                                      Constraint::outside_ball(vec2(-1.8, -0.8), 0.9),
                                      Constraint::outside_ball(vec2(1.2, 1.8), 0.8)}));
    return zoo;
}

}  // namespace

TEST_CASE("half-space hinge values") {
    const Constraint c = Constraint::half_space(vec2(1, 1), 0.0);
    CHECK(c.violation(vec2(1, 1)) == 0.0);
    CHECK(c.violation(vec2(-1, -2)) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(c.is_satisfied(vec2(0, 0), 0.0));  // boundary is feasible
}

TEST_CASE("annulus hinge values") {
    const Constraint c = Constraint::annulus(vec2(0, 0), 1.5, 2.8);
    CHECK(c.violation(vec2(3, 0)) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(c.is_satisfied(vec2(2, 0), 0.0));
    CHECK_FALSE(c.is_satisfied(vec2(0, 0), 0.0));
    CHECK(c.violation(vec2(0, 0)) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("conjunction of obstacles is zero outside all of them") {
    const Constraint c = Constraint::all_of({Constraint::outside_ball(vec2(0, 0.5), 1.2),
                                             Constraint::outside_ball(vec2(-1.8, -0.8), 0.9),
                                             Constraint::outside_ball(vec2(1.2, 1.8), 0.8)});
    CHECK(c.violation(vec2(5, 5)) == 0.0);
}

TEST_CASE("analytic gradients at reference points") {
    const Constraint hs = Constraint::half_space(vec2(1, 1), 0.0);
    VectorXd g = hs.violation_gradient(vec2(-1, -2));
    CHECK(g(0) == -1.0);
    CHECK(g(1) == -1.0);

    const Constraint ob = Constraint::outside_ball(vec2(0, 0), 1.0);
    g = ob.violation_gradient(vec2(0.5, 0));
    CHECK(g(0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(g(1) == doctest::Approx(0.0).epsilon(1e-15));

    // strictly feasible points have zero gradient for every variant
    for (const Constraint& c : builtin_zoo()) {
        VectorXd x = vec2(5.0, 5.0);
        if (c.violation(x) == 0.0) CHECK(c.violation_gradient(x).norm() == 0.0);
    }
    // ball-center singularity maps to zero
    CHECK(ob.violation_gradient(vec2(0, 0)).norm() == 0.0);
}

TEST_CASE("parse_constraint round-trips the config schema") {
    const auto hs = Constraint::from_json(nlohmann::json::parse(R"({"type":"halfspace","a":[1,1],"b":0})"));
    CHECK(hs.dim() == 2);
    CHECK(hs.violation(vec2(-1, -2)) == doctest::Approx(3.0));

    const auto cs3 = Constraint::from_json(nlohmann::json::parse(R"({
        "type":"all_of","children":[
            {"type":"outside_ball","c":[0,0.5],"r":1.2},
            {"type":"outside_ball","c":[-1.8,-0.8],"r":0.9},
            {"type":"outside_ball","c":[1.2,1.8],"r":0.8}]})"));
    CHECK(cs3.is_conjunction());
    CHECK(cs3.children().size() == 3);

    CHECK_THROWS_AS(Constraint::from_json(nlohmann::json::parse(
                        R"({"type":"annulus","c":[0,0],"r_min":2.8,"r_max":1.5})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(Constraint::from_json(nlohmann::json::parse(R"({"type":"moebius"})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(Constraint::from_json(nlohmann::json::parse(R"({"type":"halfspace","a":"x","b":0})")),
                    std::invalid_argument);
}

TEST_CASE("dimension mismatch is a hard error") {
    const Constraint c = Constraint::half_space(vec2(1, 1), 0.0);
    VectorXd x3(3);
    x3 << 1, 2, 3;
    CHECK_THROWS_AS(c.violation(x3), std::invalid_argument);
    CHECK_THROWS_AS(c.violation_gradient(x3), std::invalid_argument);
    CHECK_THROWS_AS(c.is_satisfied(x3), std::invalid_argument);
}

TEST_CASE("non-negativity and zero-set equivalence on random points") {
    auto engine = lgvf::make_engine(7, lgvf::Stream::probes);
    std::normal_distribution<double> normal(0.0, 2.5);
    const auto zoo = builtin_zoo();
    for (int i = 0; i < 100000; ++i) {
        const VectorXd x = vec2(normal(engine), normal(engine));
        for (const Constraint& c : zoo) {
            const double v = c.violation(x);
            REQUIRE(v >= 0.0);
            REQUIRE(c.is_satisfied(x, 0.0) == (v == 0.0));
        }
    }
    // boundary-adjacent probes around the annulus radii
    const Constraint ann = Constraint::annulus(vec2(0, 0), 1.5, 2.8);
    for (double r : {1.5 - 1e-9, 1.5, 1.5 + 1e-9, 2.8 - 1e-9, 2.8, 2.8 + 1e-9}) {
        const VectorXd x = vec2(r, 0);
        REQUIRE(ann.is_satisfied(x, 0.0) == (ann.violation(x) == 0.0));
    }
}

TEST_CASE("analytic gradient matches central finite differences away from kinks") {
    auto engine = lgvf::make_engine(11, lgvf::Stream::probes);
    std::normal_distribution<double> normal(0.0, 2.5);
    const auto zoo = builtin_zoo();
    int checked = 0;
    for (int i = 0; i < 4000; ++i) {
        const VectorXd x = vec2(normal(engine), normal(engine));
        for (const Constraint& c : zoo) {
            if (c.violation(x) <= 1e-3) continue;
            const VectorXd ga = c.violation_gradient(x);
            const VectorXd gf = fd_gradient(c, x);
            const double denom = std::max(gf.norm(), 1e-8);
            REQUIRE((ga - gf).norm() / denom < 1e-5);
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("conjunction is exactly additive in values and gradients") {
    const Constraint a = Constraint::outside_ball(vec2(-1, 0), 1.5);
    const Constraint b = Constraint::annulus(vec2(0.5, 0.5), 0.5, 3.0);
    const Constraint both = Constraint::all_of({a, b});
    auto engine = lgvf::make_engine(13, lgvf::Stream::probes);
    std::normal_distribution<double> normal(0.0, 2.0);
    for (int i = 0; i < 2000; ++i) {
        const VectorXd x = vec2(normal(engine), normal(engine));
        REQUIRE(both.violation(x) == a.violation(x) + b.violation(x));
        REQUIRE((both.violation_gradient(x) - (a.violation_gradient(x) + b.violation_gradient(x)))
                    .norm() == 0.0);
    }
}

TEST_CASE("obstacle gradient is unit-norm and radial inside the ball") {
    const Constraint ob = Constraint::outside_ball(vec2(0.3, -0.7), 2.0);
    auto engine = lgvf::make_engine(17, lgvf::Stream::probes);
    std::uniform_real_distribution<double> uni(-1.9, 1.9);
    for (int i = 0; i < 2000; ++i) {
        const VectorXd x = vec2(0.3 + uni(engine) / 2, -0.7 + uni(engine) / 2);
        const VectorXd delta = x - vec2(0.3, -0.7);
        if (delta.norm() == 0.0 || ob.violation(x) == 0.0) continue;
        const VectorXd g = ob.violation_gradient(x);
        REQUIRE(std::abs(g.norm() - 1.0) < 1e-12);
        // points from x toward the center
        REQUIRE(g.dot(delta) < 0.0);
    }
}
