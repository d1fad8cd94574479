#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bayescub::domain {

// Evaluation callback on [0,1]^d plus optional known value and metadata.
struct IntegrandDef {
    std::function<double(std::span<const double>)> eval;
    int dimension = 1;
    std::optional<double> true_value;
    std::string name;
};

enum class Transform { None, Baker, SidiC1, SidiC2 };

Transform parse_transform(const std::string& s);
std::string transform_name(Transform t);

// Tent map, weightless.
double baker(double x);
// Sidi's periodizers; return (Psi(x), Psi'(x)).
std::pair<double, double> sidi_c1(double x);
std::pair<double, double> sidi_c2(double x);

// f(x) = g(Psi(x)) * prod Psi'(x_l); the integral is unchanged.
IntegrandDef periodize(const IntegrandDef& f, Transform kind);

double norm_cdf(double x);
double norm_inv_cdf(double p);

// Box-constrained Gaussian probability; bounds may be +-infinity.
struct MvnProblem {
    std::vector<double> a, b;               // bounds in R^{d'}
    std::vector<std::vector<double>> L;     // lower-triangular factor, Sigma = L L^T
    void validate() const;
};

// Sequential conditional-probability transform: a d'-dimensional box
// probability becomes an integral over [0,1]^{d'-1}.
IntegrandDef genz_mvn(const MvnProblem& problem);

MvnProblem mvn_paper_problem();
// Frozen regression value for mvn_paper_problem (high-n fast-path run).
double mvn_paper_reference();

IntegrandDef keister(int d);
double keister_true(int d);

struct OptionProblem {
    double maturity = 0.25;
    int steps = 13;
    double spot = 100.0;
    double rate = 0.05;
    double volatility = 0.5;
    double strike = 100.0;
    void validate() const;
};

// Asian arithmetic-mean call under discretized geometric Brownian motion,
// mapped to [0,1]^d through the PCA factor of the path covariance.
IntegrandDef asian_option(const OptionProblem& problem);

OptionProblem option_paper_problem();
// Frozen regression value for option_paper_problem (2^22-point fast-path run).
double option_paper_reference();

// Registry for the CLI: "mvn", "keister", "option".
IntegrandDef builtin_integrand(const std::string& name, int d);

}  // namespace bayescub::domain
