#include "bayescub/inference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bayescub/errors.hpp"

namespace bayescub::inference {

namespace {

double tail_sumsq(const fbt::cvec& y_tilde) {
    double s = 0.0;
    for (std::size_t i = 1; i < y_tilde.size(); ++i) s += std::norm(y_tilde[i]);
    return s;
}

void require_nondegenerate(const fbt::cvec& y_tilde) {
    const double tail = tail_sumsq(y_tilde);
    const double head = std::norm(y_tilde[0]);
    if (tail <= (head + tail) * 1e-30)
        throw DegenerateData("inference: constant integrand data");
}

fbt::Eigenvalues eigs_at(double eta, const FitContext& ctx) {
    kernel::KernelSpec spec = ctx.kernel;
    spec.eta = eta;
    return fbt::eigenvalues(spec, ctx.nodes);
}

}  // namespace

double tail_quadratic(const fbt::cvec& y_tilde, const std::vector<double>& lambda, int p) {
    double s = 0.0;
    for (std::size_t i = 1; i < y_tilde.size(); ++i) {
        const double l = p == 1 ? lambda[i] : lambda[i] * lambda[i];
        s += std::norm(y_tilde[i]) / l;
    }
    return s;
}

double mle_objective(double eta, const FitContext& ctx) {
    require_nondegenerate(ctx.y_tilde);
    const auto ev = eigs_at(eta, ctx);
    const std::size_t n = ctx.y_tilde.size();
    double logdet = 0.0;
    for (double l : ev.lambda) logdet += std::log(l);
    return std::log(tail_quadratic(ctx.y_tilde, ev.lambda, 1)) + logdet / static_cast<double>(n);
}

double gcv_objective(double eta, const FitContext& ctx) {
    require_nondegenerate(ctx.y_tilde);
    const auto ev = eigs_at(eta, ctx);
    double inv_sum = 0.0;
    for (double l : ev.lambda) inv_sum += 1.0 / l;
    return std::log(tail_quadratic(ctx.y_tilde, ev.lambda, 2)) - 2.0 * std::log(inv_sum);
}

FitResult fit(Criterion criterion, const FitContext& ctx, const EtaSearch& search) {
    if (!(search.lo > 0.0 && search.lo < search.hi))
        throw std::invalid_argument("inference::fit: invalid eta search interval");
    const std::size_t n = ctx.y_tilde.size();
    FitResult res;
    res.criterion = criterion;
    res.m_hat = ctx.y_tilde[0].real() / static_cast<double>(n);

    const double tail = tail_sumsq(ctx.y_tilde);
    const double head = std::norm(ctx.y_tilde[0]);
    if (tail <= (head + tail) * 1e-30) {
        res.degenerate = true;
        res.eta_hat = search.lo;
        return res;
    }

    auto objective = [&](double log_eta) {
        const double eta = std::exp(log_eta);
        return criterion == Criterion::GCV ? gcv_objective(eta, ctx) : mle_objective(eta, ctx);
    };

    // golden-section on log eta
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(search.lo), b = std::log(search.hi);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < 50 && (b - a) > 1e-2; ++it) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = objective(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = objective(x2);
        }
    }
    const double log_eta = f1 <= f2 ? x1 : x2;
    res.eta_hat = std::exp(log_eta);
    res.objective_value = std::min(f1, f2);

    const double span = std::log(search.hi) - std::log(search.lo);
    res.at_search_boundary = log_eta - std::log(search.lo) < 0.01 * span ||
                             std::log(search.hi) - log_eta < 0.01 * span;

    const auto ev = eigs_at(res.eta_hat, ctx);
    const double nn = static_cast<double>(n);
    if (criterion == Criterion::GCV) {
        double inv_sum = 0.0;
        for (double l : ev.lambda) inv_sum += 1.0 / l;
        res.s2_hat = tail_quadratic(ctx.y_tilde, ev.lambda, 2) / (nn * inv_sum);
    } else {
        res.s2_hat = tail_quadratic(ctx.y_tilde, ev.lambda, 1) / (nn * nn);
    }
    return res;
}

double credible_half_width(Criterion criterion, const fbt::FbtState& state, double quantile,
                           double t_level) {
    const double nn = static_cast<double>(state.n);
    const double s1 = tail_quadratic(state.y_tilde, state.lambda, 1);
    if (s1 == 0.0) return 0.0;
    // lambda_ring_1/lambda_1 evaluated as ring/(ring+n), never 1 - n/lambda_1
    const double ratio = state.lambda_ring_1 / (state.lambda_ring_1 + nn);
    switch (criterion) {
        case Criterion::EmpiricalBayes:
            return quantile / nn * std::sqrt(ratio * s1);
        case Criterion::FullBayes: {
            const double t = student_t_quantile(static_cast<int>(state.n) - 1, t_level);
            return t / nn * std::sqrt(state.lambda_ring_1 * s1 / (nn - 1.0));
        }
        case Criterion::GCV: {
            const double s2 = tail_quadratic(state.y_tilde, state.lambda, 2);
            double inv_sum = 0.0;
            for (double l : state.lambda) inv_sum += 1.0 / l;
            return quantile / nn * std::sqrt(ratio * s2 / (inv_sum / nn));
        }
    }
    return 0.0;
}

namespace {

// Regularized incomplete beta via the Lentz continued fraction.
double betacf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

double incbeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double nu) {
    const double x = nu / (nu + t * t);
    const double half_tail = 0.5 * incbeta(0.5 * nu, 0.5, x);
    return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

}  // namespace

double student_t_quantile(int nu, double p) {
    if (nu < 1) throw std::invalid_argument("student_t_quantile: nu must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("student_t_quantile: p must be in (0,1)");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -student_t_quantile(nu, 1.0 - p);

    const double dnu = static_cast<double>(nu);
    double lo = 0.0, hi = 2.0;
    while (student_t_cdf(hi, dnu) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, dnu) < p) lo = mid; else hi = mid;
        if (hi - lo < 1e-10 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace bayescub::inference
