#include "lgvf/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include "lgvf/rng.hpp"

namespace lgvf {

GaussianMixture::GaussianMixture(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw std::invalid_argument("mixture: needs at least one component");
    dim_ = static_cast<int>(components_.front().mean.size());
    double total = 0.0;
    for (const auto& c : components_) {
        if (static_cast<int>(c.mean.size()) != dim_) {
            throw std::invalid_argument("mixture: component means disagree on dimension");
        }
        if (c.sigma <= 0.0) throw std::invalid_argument("mixture: sigma must be > 0");
        if (c.weight <= 0.0) throw std::invalid_argument("mixture: weights must be > 0");
        total += c.weight;
    }
    cumulative_.reserve(components_.size());
    double acc = 0.0;
    for (auto& c : components_) {
        c.weight /= total;
        acc += c.weight;
        cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
}

Eigen::VectorXd GaussianMixture::mean() const {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(dim_);
    for (const auto& c : components_) mu += c.weight * c.mean;
    return mu;
}

int GaussianMixture::draw_component(std::mt19937_64& engine) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(engine);
    for (std::size_t i = 0; i < cumulative_.size(); ++i) {
        if (u < cumulative_[i]) return static_cast<int>(i);
    }
    return static_cast<int>(cumulative_.size()) - 1;
}

Eigen::VectorXd GaussianMixture::draw(std::mt19937_64& engine) const {
    const auto& c = components_[static_cast<std::size_t>(draw_component(engine))];
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd x(dim_);
    for (int i = 0; i < dim_; ++i) x(i) = c.mean(i) + c.sigma * normal(engine);
    return x;
}

GaussianMixture GaussianMixture::from_json(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("components") || !spec["components"].is_array() ||
        spec["components"].empty()) {
        throw std::invalid_argument("mixture: expected {components:[{mean,sigma,weight}...]}");
    }
    std::vector<MixtureComponent> components;
    for (const auto& node : spec["components"]) {
        MixtureComponent c;
        const auto mean = node.at("mean").get<std::vector<double>>();
        c.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
        c.sigma = node.at("sigma").get<double>();
        c.weight = node.value("weight", 1.0);
        components.push_back(std::move(c));
    }
    return GaussianMixture(std::move(components));
}

Eigen::MatrixXd sample_base(int n, int d, std::uint64_t seed) {
    if (n < 0 || d < 1) throw std::invalid_argument("sample_base: bad shape");
    auto engine = make_engine(seed, Stream::base_samples);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd out(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = normal(engine);
    return out;
}

Eigen::MatrixXd sample_mixture(const GaussianMixture& m, int n, std::uint64_t seed) {
    auto engine = make_engine(seed, Stream::mixture_samples);
    Eigen::MatrixXd out(n, m.dim());
    for (int i = 0; i < n; ++i) out.row(i) = m.draw(engine).transpose();
    return out;
}

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

GaussianMixture equal_weight_mixture(const std::vector<Eigen::VectorXd>& means, double sigma) {
    std::vector<MixtureComponent> components;
    components.reserve(means.size());
    for (const auto& mu : means) components.push_back({mu, sigma, 1.0});
    return GaussianMixture(std::move(components));
}

// Master seed for the fixed high-dimensional mode layout; one layout per d,
// shared by every run regardless of the run seed.
constexpr std::uint64_t kHighDimLayoutSeed = 0x9d2c5680u;

GaussianMixture highdim_mixture(int d) {
    auto engine = make_engine(kHighDimLayoutSeed, Stream::mixture_samples, static_cast<std::uint64_t>(d));
    std::normal_distribution<double> normal(0.0, 1.0);
    const double target_sum = 2.0 * std::sqrt(static_cast<double>(d));
    std::vector<Eigen::VectorXd> means;
    for (int k = 0; k < 4; ++k) {
        Eigen::VectorXd mu(d);
        for (int i = 0; i < d; ++i) mu(i) = normal(engine);
        const double s = mu.sum();
        if (s < target_sum) mu.array() += (target_sum - s) / static_cast<double>(d);
        means.push_back(std::move(mu));
    }
    return equal_weight_mixture(means, 0.5);
}

void require_feasible_means(const GaussianMixture& m, const Constraint& c, const std::string& name) {
    for (const auto& component : m.components()) {
        if (c.violation(component.mean) != 0.0) {
            throw std::logic_error(name + ": built-in mixture mean violates its constraint");
        }
    }
}

}  // namespace

CaseStudy builtin_case_study(int id, int d) {
    switch (id) {
        case 1: {
            CaseStudy cs{"cs1",
                         1,
                         equal_weight_mixture({vec2(-1.5, 2.0), vec2(2.0, 0.5)}, 0.4),
                         Constraint::half_space(vec2(1, 1), 0.0),
                         10.0,
                         0.5,
                         128};
            require_feasible_means(cs.target, cs.constraint, cs.name);
            return cs;
        }
        case 2: {
            // Four modes near the ring boundaries, alternating between
            // r_min + 0.15 and r_max - 0.15 at compass angles.
            const double r_lo = 1.5 + 0.15, r_hi = 2.8 - 0.15;
            CaseStudy cs{"cs2",
                         2,
                         equal_weight_mixture(
                             {vec2(r_lo, 0), vec2(0, r_hi), vec2(-r_lo, 0), vec2(0, -r_hi)}, 0.45),
                         Constraint::annulus(vec2(0, 0), 1.5, 2.8),
                         15.0,
                         1.0,
                         128};
            require_feasible_means(cs.target, cs.constraint, cs.name);
            return cs;
        }
        case 3: {
            CaseStudy cs{"cs3",
                         3,
                         equal_weight_mixture({vec2(-2.5, -2.0), vec2(2.5, 2.5), vec2(2.0, -1.5)}, 0.3),
                         Constraint::all_of({Constraint::outside_ball(vec2(0, 0.5), 1.2),
                                             Constraint::outside_ball(vec2(-1.8, -0.8), 0.9),
                                             Constraint::outside_ball(vec2(1.2, 1.8), 0.8)}),
                         15.0,
                         1.5,
                         128};
            require_feasible_means(cs.target, cs.constraint, cs.name);
            return cs;
        }
        case 4: {
            if (d < 1) throw std::invalid_argument("case study 4 requires a dimension");
            CaseStudy cs{"cs4_d" + std::to_string(d),
                         4,
                         highdim_mixture(d),
                         Constraint::half_space(Eigen::VectorXd::Ones(d), 0.0),
                         10.0,
                         1.0,
                         std::min(256, 4 * d)};
            require_feasible_means(cs.target, cs.constraint, cs.name);
            return cs;
        }
        default:
            throw std::invalid_argument("unknown case study id " + std::to_string(id));
    }
}

}  // namespace lgvf
