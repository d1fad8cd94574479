#include "bayescub/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace bayescub::kernel {

void KernelSpec::validate() const {
    if (family == Family::ShiftInvariantBernoulli) {
        if (order != 1 && order != 2) throw std::invalid_argument("kernel: order r must be 1 or 2");
        if (!(eta > 0.0)) throw std::invalid_argument("kernel: eta must be positive");
    } else {
        if (!(theta > 0.0)) throw std::invalid_argument("kernel: theta must be positive");
    }
}

double bernoulli_poly(int degree, double x) { return bernoulli_poly_t<double>(degree, x); }

double wrap_diff(double t, double x) {
    double u = t - x;
    if (u < 0.0) u += 1.0;
    return u;
}

double centered_factor(const KernelSpec& spec, double u) {
    return centered_factor_t<double>(spec, u);
}

double kernel_eval(const KernelSpec& spec, std::span<const double> t, std::span<const double> x) {
    return kernel_eval_t<double>(spec, t, x);
}

double centered_eval(const KernelSpec& spec, std::span<const double> t, std::span<const double> x) {
    return centered_eval_t<double>(spec, t, x);
}

std::vector<double> centered_first_column(const KernelSpec& spec,
                                          const std::vector<std::vector<double>>& nodes) {
    if (spec.family != Family::ShiftInvariantBernoulli)
        throw std::invalid_argument("centered_first_column: shift-invariant kernel required");
    std::vector<double> col(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        col[i] = centered_eval(spec, nodes[i], nodes[0]);
    return col;
}

double matern_mean_1d(double theta, double x) {
    // F(a) = int_0^a exp(-theta u)(1+theta u) du = (2 - exp(-theta a)(2+theta a))/theta
    auto F = [theta](double a) { return (2.0 - std::exp(-theta * a) * (2.0 + theta * a)) / theta; };
    return F(x) + F(1.0 - x);
}

double matern_c0_1d(double theta) {
    // 2 * int_0^1 F(a) da = 2 (2 theta - 3 + exp(-theta)(3+theta)) / theta^2
    return 2.0 * (2.0 * theta - 3.0 + std::exp(-theta) * (3.0 + theta)) / (theta * theta);
}

KernelMeanIntegrals kernel_mean_integrals(const KernelSpec& spec, int dimension) {
    KernelMeanIntegrals out;
    if (spec.family == Family::ShiftInvariantBernoulli) {
        out.c0 = 1.0;
        out.c_fn = [](std::span<const double>) { return 1.0; };
        return out;
    }
    const double theta = spec.theta;
    double c0 = 1.0;
    for (int l = 0; l < dimension; ++l) c0 *= matern_c0_1d(theta);
    out.c0 = c0;
    out.c_fn = [theta](std::span<const double> x) {
        double prod = 1.0;
        for (double xl : x) prod *= matern_mean_1d(theta, xl);
        return prod;
    };
    return out;
}

}  // namespace bayescub::kernel
