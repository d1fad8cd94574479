#pragma once

#include <vector>

#include "bayescub/fbt.hpp"
#include "bayescub/kernel.hpp"

namespace bayescub::inference {

enum class Criterion { EmpiricalBayes, FullBayes, GCV };

struct FitResult {
    double eta_hat = 0.0;
    double m_hat = 0.0;          // posterior mean parameter, = mean(y)
    double s2_hat = 0.0;
    double objective_value = 0.0;
    Criterion criterion = Criterion::EmpiricalBayes;
    bool at_search_boundary = false;  // argmin within 1% of a search endpoint
    bool degenerate = false;          // constant data; objectives undefined
};

// Integrand data and matching nodes; y_tilde is cached once per n.
struct FitContext {
    const std::vector<std::vector<double>>& nodes;
    const fbt::cvec& y_tilde;  // transform of the data in node order
    kernel::KernelSpec kernel; // eta field is overwritten during the search
};

struct EtaSearch {
    double lo = 1e-3;
    double hi = 1e2;
};

// sum_{i>=2} |y~_i|^2 / lambda_i^p for p in {1,2}.
double tail_quadratic(const fbt::cvec& y_tilde, const std::vector<double>& lambda, int p);

// log(sum_{i>=2}|y~_i|^2/lambda_i) + (1/n) sum_i log(lambda_i)
double mle_objective(double eta, const FitContext& ctx);

// log(sum_{i>=2}|y~_i|^2/lambda_i^2) - 2 log(sum_i 1/lambda_i)
double gcv_objective(double eta, const FitContext& ctx);

// Golden-section search over log eta; full Bayes reuses the MLE objective.
FitResult fit(Criterion criterion, const FitContext& ctx, const EtaSearch& search);

// Credible-interval half-width at the given transformed state; quantile is the
// Gaussian multiplier (2.58 for 99% by default, not used by FullBayes which
// takes the Student-t quantile at (1+level)/2).
double credible_half_width(Criterion criterion, const fbt::FbtState& state, double quantile = 2.58,
                           double t_level = 0.995);

// Inverse CDF of Student's t with nu degrees of freedom.
double student_t_quantile(int nu, double p);

}  // namespace bayescub::inference
