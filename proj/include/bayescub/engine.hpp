#pragma once

#include <cstdint>
#include <string>

#include "bayescub/domain.hpp"
#include "bayescub/inference.hpp"
#include "bayescub/kernel.hpp"

namespace bayescub::engine {

struct CubatureOptions {
    double tolerance = 1e-3;
    inference::Criterion criterion = inference::Criterion::EmpiricalBayes;
    kernel::KernelSpec kernel;
    domain::Transform transform = domain::Transform::None;
    std::uint64_t n0 = 1u << 8;
    std::uint64_t n_max = 1u << 20;
    std::uint64_t seed = 0;
    double quantile = 2.58;   // Gaussian multiplier for the 99% credible level
    double t_level = 0.995;   // Student-t percentile for the full-Bayes width
    inference::EtaSearch eta_search;
    std::string gen_vector_path;
    double dense_jitter = 0.0;  // generic path only

    void validate() const;
};

struct WallTimes {
    double sampling_s = 0.0;
    double fitting_s = 0.0;
    double transform_s = 0.0;
};

struct CubatureResult {
    double mu_hat = 0.0;
    std::uint64_t n_used = 0;
    double half_width = 0.0;
    bool converged = false;
    inference::FitResult fit;
    WallTimes wall_times;
};

// Algorithm: sample doubling blocks of lattice nodes, fit eta, stop when the
// credible half-width is within tolerance.  Bernoulli kernel, O(n log n).
CubatureResult integrate(const domain::IntegrandDef& f, int d, const CubatureOptions& opts);

// Same loop on the dense O(n^3) path; works for any kernel with computable
// mean integrals (the Matern demo).
CubatureResult integrate_generic(const domain::IntegrandDef& f, int d,
                                 const CubatureOptions& opts);

}  // namespace bayescub::engine
