#include "bayescub/engine.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "bayescub/dense.hpp"
#include "bayescub/errors.hpp"
#include "bayescub/lattice.hpp"

namespace bayescub::engine {

namespace {

using clock_t_ = std::chrono::steady_clock;

double seconds_since(clock_t_::time_point t0) {
    return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

std::vector<double> draw_shift(std::uint64_t seed, int d) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> shift(d);
    for (auto& s : shift) s = unif(rng);
    return shift;
}

inference::EtaSearch warm_start(const inference::EtaSearch& box, double eta_prev) {
    inference::EtaSearch s;
    s.lo = std::max(box.lo, eta_prev / 30.0);
    s.hi = std::min(box.hi, eta_prev * 30.0);
    if (!(s.lo < s.hi)) return box;
    return s;
}

}  // namespace

void CubatureOptions::validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("options: tolerance must be positive");
    if (!lattice::is_power_of_two(n0) || !lattice::is_power_of_two(n_max) || n0 > n_max)
        throw std::invalid_argument("options: n0, n_max must be powers of two with n0 <= n_max");
    kernel.validate();
}

CubatureResult integrate(const domain::IntegrandDef& f, int d, const CubatureOptions& opts) {
    opts.validate();
    if (opts.kernel.family != kernel::Family::ShiftInvariantBernoulli)
        throw std::invalid_argument("integrate: fast path requires the Bernoulli kernel");

    const int max_log2n = std::countr_zero(opts.n_max);
    const auto cfg = lattice::make_config(d, draw_shift(opts.seed, d), max_log2n,
                                          opts.gen_vector_path);
    const auto g = domain::periodize(f, opts.transform);

    CubatureResult res;
    std::vector<std::vector<double>> nodes;
    std::vector<double> y;
    inference::EtaSearch search = opts.eta_search;

    for (std::uint64_t n = opts.n0;; n *= 2) {
        auto t0 = clock_t_::now();
        for (auto& x : lattice::node_block(y.size(), n, cfg)) {
            y.push_back(g.eval(x));
            nodes.push_back(std::move(x));
        }
        res.wall_times.sampling_s += seconds_since(t0);

        t0 = clock_t_::now();
        const auto y_tilde = fbt::transform(y);
        res.wall_times.transform_s += seconds_since(t0);

        t0 = clock_t_::now();
        inference::FitContext ctx{nodes, y_tilde, opts.kernel};
        res.fit = inference::fit(opts.criterion, ctx, search);
        res.mu_hat = res.fit.m_hat;
        res.n_used = n;

        if (res.fit.degenerate) {
            res.half_width = 0.0;
            res.converged = true;
            res.wall_times.fitting_s += seconds_since(t0);
            return res;
        }
        search = warm_start(opts.eta_search, res.fit.eta_hat);

        kernel::KernelSpec fitted = opts.kernel;
        fitted.eta = res.fit.eta_hat;
        const auto ev = fbt::eigenvalues(fitted, nodes);
        fbt::FbtState state{y.size(), y_tilde, ev.lambda, ev.lambda_ring_1, res.fit.eta_hat};
        res.half_width = inference::credible_half_width(opts.criterion, state, opts.quantile,
                                                        opts.t_level);
        res.wall_times.fitting_s += seconds_since(t0);

        if (res.half_width <= opts.tolerance) {
            res.converged = true;
            return res;
        }
        if (n == opts.n_max) return res;  // best effort, converged stays false
    }
}

CubatureResult integrate_generic(const domain::IntegrandDef& f, int d,
                                 const CubatureOptions& opts) {
    opts.validate();
    const int max_log2n = std::countr_zero(opts.n_max);
    const auto cfg = lattice::make_config(d, draw_shift(opts.seed, d), max_log2n,
                                          opts.gen_vector_path);
    const auto g = domain::periodize(f, opts.transform);
    const bool matern = opts.kernel.family == kernel::Family::Matern;
    const bool gcv = opts.criterion == inference::Criterion::GCV;

    CubatureResult res;
    std::vector<std::vector<double>> nodes;
    std::vector<double> y;
    inference::EtaSearch search = opts.eta_search;

    for (std::uint64_t n = opts.n0;; n *= 2) {
        auto t0 = clock_t_::now();
        for (auto& x : lattice::node_block(y.size(), n, cfg)) {
            y.push_back(g.eval(x));
            nodes.push_back(std::move(x));
        }
        res.wall_times.sampling_s += seconds_since(t0);

        t0 = clock_t_::now();
        Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
        auto posterior_at = [&](double scale) {
            kernel::KernelSpec spec = opts.kernel;
            (matern ? spec.theta : spec.eta) = scale;
            return dense::DensePosterior<double>::build(spec, nodes, opts.dense_jitter);
        };
        auto objective = [&](double log_scale) {
            const auto p = posterior_at(std::exp(log_scale));
            const auto obj = dense::dense_theta_objectives(p, yv);
            return gcv ? obj.gcv : obj.mle;
        };

        double scale_hat;
        try {
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
            scale_hat = std::exp(f1 <= f2 ? x1 : x2);
            res.fit.objective_value = std::min(f1, f2);
        } catch (const DegenerateData&) {
            res.mu_hat = yv.mean();
            res.n_used = n;
            res.half_width = 0.0;
            res.converged = true;
            res.fit.degenerate = true;
            res.fit.m_hat = res.mu_hat;
            res.wall_times.fitting_s += seconds_since(t0);
            return res;
        }
        search = warm_start(opts.eta_search, scale_hat);

        dense::DensePosterior<double> p = [&] {
            try {
                return posterior_at(scale_hat);
            } catch (const CholeskyFailure& e) {
                throw CholeskyFailure(std::string(e.what()) +
                                      " (lower n_max or add jitter on the generic path)");
            }
        }();
        const double tq = inference::student_t_quantile(static_cast<int>(n) - 1, opts.t_level);
        const auto est = dense::dense_estimators(p, yv, opts.quantile, tq);

        res.fit.eta_hat = scale_hat;
        res.fit.criterion = opts.criterion;
        res.fit.m_hat = gcv ? est.m_gcv : est.m_mle;
        res.fit.s2_hat = gcv ? est.s2_gcv : est.s2_mle;
        res.mu_hat = gcv ? est.mu_gcv : est.mu_mle;
        res.n_used = n;
        switch (opts.criterion) {
            case inference::Criterion::EmpiricalBayes: res.half_width = est.err_mle; break;
            case inference::Criterion::FullBayes: res.half_width = est.err_full; break;
            case inference::Criterion::GCV: res.half_width = est.err_gcv; break;
        }
        res.wall_times.fitting_s += seconds_since(t0);

        if (res.half_width <= opts.tolerance) {
            res.converged = true;
            return res;
        }
        if (n == opts.n_max) return res;
    }
}

}  // namespace bayescub::engine
