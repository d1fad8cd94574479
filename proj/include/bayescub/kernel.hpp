#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace bayescub::kernel {

enum class Family { ShiftInvariantBernoulli, Matern };

struct KernelSpec {
    Family family = Family::ShiftInvariantBernoulli;
    int order = 1;       // r in {1,2}, Bernoulli only
    double eta = 1.0;    // scale, Bernoulli only
    double theta = 1.0;  // Matern only

    void validate() const;
};

// B_2 or B_4 on [0,1].
double bernoulli_poly(int degree, double x);

// frac(t - x) computed as t - x + 1 when negative.
double wrap_diff(double t, double x);

// Full covariance kernel value C(t,x).
double kernel_eval(const KernelSpec& spec, std::span<const double> t, std::span<const double> x);

// Centered per-dimension factor: ring_C_l(u) = -(-1)^r * eta * B_2r(u).
double centered_factor(const KernelSpec& spec, double u);

// Centered kernel value ring_C(t,x) = C(t,x) - 1, via the product recursion
// (never by subtraction).
double centered_eval(const KernelSpec& spec, std::span<const double> t, std::span<const double> x);

// Entry i = ring_C(x_i, x_1) for the first n lattice nodes.
std::vector<double> centered_first_column(const KernelSpec& spec,
                                          const std::vector<std::vector<double>>& nodes);

// Scalar-generic evaluation.  The smallest Gram eigenvalues sit many orders
// of magnitude below ||C||, so the eigenvalue transform and the dense oracle
// instantiate these with long double to keep entries exact functions of the
// node doubles beyond double roundoff.
template <typename Scalar>
Scalar bernoulli_poly_t(int degree, Scalar x) {
    if (degree == 2) return (x - Scalar(1)) * x + Scalar(1) / Scalar(6);
    if (degree == 4) return ((x - Scalar(2)) * x + Scalar(1)) * x * x - Scalar(1) / Scalar(30);
    throw std::invalid_argument("bernoulli_poly: degree must be 2 or 4");
}

template <typename Scalar>
Scalar centered_factor_t(const KernelSpec& spec, Scalar u) {
    // -(-1)^r eta B_2r(u): r=1 adds +eta B_2, r=2 subtracts eta B_4.
    const Scalar b = bernoulli_poly_t(2 * spec.order, u);
    return spec.order == 1 ? Scalar(spec.eta) * b : -Scalar(spec.eta) * b;
}

template <typename Scalar>
Scalar kernel_eval_t(const KernelSpec& spec, std::span<const double> t,
                     std::span<const double> x) {
    if (t.size() != x.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
    using std::abs;
    using std::exp;
    Scalar prod(1);
    if (spec.family == Family::ShiftInvariantBernoulli) {
        // B_{2r}(u) = B_{2r}(1-u), so |t-x| stands in for t-x mod 1 and keeps
        // the evaluation bit-exact symmetric in its arguments
        for (std::size_t l = 0; l < t.size(); ++l)
            prod *= Scalar(1) + centered_factor_t(spec, abs(Scalar(t[l]) - Scalar(x[l])));
    } else {
        for (std::size_t l = 0; l < t.size(); ++l) {
            const Scalar u = Scalar(spec.theta) * abs(Scalar(t[l]) - Scalar(x[l]));
            prod *= exp(-u) * (Scalar(1) + u);
        }
    }
    return prod;
}

template <typename Scalar>
Scalar centered_eval_t(const KernelSpec& spec, std::span<const double> t,
                       std::span<const double> x) {
    if (t.size() != x.size()) throw std::invalid_argument("centered_eval: dimension mismatch");
    using std::abs;
    Scalar ring = centered_factor_t(spec, abs(Scalar(t[0]) - Scalar(x[0])));
    for (std::size_t l = 1; l < t.size(); ++l) {
        const Scalar cl = centered_factor_t(spec, abs(Scalar(t[l]) - Scalar(x[l])));
        ring = ring * (Scalar(1) + cl) + cl;
    }
    return ring;
}

struct KernelMeanIntegrals {
    double c0;                                              // double integral of C over the unit cube
    std::function<double(std::span<const double>)> c_fn;    // x -> integral_t C(t,x) dt
};

// Bernoulli kernels integrate to 1 exactly; Matern uses closed forms.
KernelMeanIntegrals kernel_mean_integrals(const KernelSpec& spec, int dimension);

// Per-dimension Matern integral g(x) = int_0^1 exp(-theta|x-t|)(1+theta|x-t|) dt.
double matern_mean_1d(double theta, double x);
// Per-dimension double integral of the Matern kernel over [0,1]^2.
double matern_c0_1d(double theta);

}  // namespace bayescub::kernel
