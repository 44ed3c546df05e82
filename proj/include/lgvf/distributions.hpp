#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "lgvf/constraint.hpp"

namespace lgvf {

struct MixtureComponent {
    Eigen::VectorXd mean;
    double sigma;   // isotropic
    double weight;  // normalized at construction
};

// Analytic target distribution: a mixture of isotropic Gaussians.
class GaussianMixture {
public:
    explicit GaussianMixture(std::vector<MixtureComponent> components);

    int dim() const { return dim_; }
    const std::vector<MixtureComponent>& components() const { return components_; }

    Eigen::VectorXd mean() const;  // closed-form mixture mean

    // Draws one sample: component by cumulative weight, then mean + sigma*z.
    Eigen::VectorXd draw(std::mt19937_64& engine) const;
    int draw_component(std::mt19937_64& engine) const;

    static GaussianMixture from_json(const nlohmann::json& spec);

private:
    std::vector<MixtureComponent> components_;
    std::vector<double> cumulative_;
    int dim_;
};

// i.i.d. standard normal rows, deterministic in seed.
Eigen::MatrixXd sample_base(int n, int d, std::uint64_t seed);
Eigen::MatrixXd sample_mixture(const GaussianMixture& m, int n, std::uint64_t seed);

/**
 * One of the four built-in constrained-generation setups, with the target
 * mixture, the constraint, and the per-case hyperparameter defaults that the
 * run harness applies on top of the global training/sampling defaults.
 */
struct CaseStudy {
    std::string name;  // cs1 | cs2 | cs3 | cs4_d<d>
    int id = 0;
    GaussianMixture target;
    Constraint constraint;
    double lambda_max = 10.0;
    double eta_max = 0.5;
    int hidden_width = 128;
};

// id in {1,2,3,4}; d is consulted only for id 4 (the half-space scaling
// study, hidden width min(256, 4d)). Every built-in mixture mean is strictly
// feasible; this is checked at construction.
CaseStudy builtin_case_study(int id, int d = 2);

}  // namespace lgvf
