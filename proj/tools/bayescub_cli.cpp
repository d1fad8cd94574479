// Command-line harness: single integrations, randomized-tolerance sweeps, and
// fast-vs-generic timing comparisons.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "bayescub/dense.hpp"
#include "bayescub/engine.hpp"
#include "bayescub/errors.hpp"
#include "bayescub/fbt.hpp"
#include "bayescub/lattice.hpp"

using namespace bayescub;

namespace {

constexpr const char* kCsvHeader =
    "integrand,d,eps,criterion,transform,r,seed,mu_hat,err_ratio,n,half_width,time_s,converged";

inference::Criterion parse_criterion(const std::string& s) {
    if (s == "mle") return inference::Criterion::EmpiricalBayes;
    if (s == "full") return inference::Criterion::FullBayes;
    if (s == "gcv") return inference::Criterion::GCV;
    throw CLI::ValidationError("--criterion", "must be one of mle|full|gcv");
}

std::string criterion_name(inference::Criterion c) {
    switch (c) {
        case inference::Criterion::EmpiricalBayes: return "mle";
        case inference::Criterion::FullBayes: return "full";
        case inference::Criterion::GCV: return "gcv";
    }
    return "?";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CommonFlags {
    std::string integrand = "mvn";
    int dim = 0;  // 0 = integrand default
    std::string criterion = "mle";
    std::string transform;
    int kernel_r = 2;
    std::uint64_t seed = 0;
    std::uint64_t n0 = 1u << 8;
    std::uint64_t nmax = 1u << 20;
    std::string gen_vector;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--integrand", f.integrand, "mvn|keister|option");
    cmd->add_option("--dim", f.dim, "integrand dimension (default per integrand)");
    cmd->add_option("--criterion", f.criterion, "mle|full|gcv");
    cmd->add_option("--transform", f.transform, "none|baker|sidi1|sidi2");
    cmd->add_option("--kernel-r", f.kernel_r, "Bernoulli kernel order r (1 or 2)");
    cmd->add_option("--seed", f.seed, "random shift seed");
    cmd->add_option("--n0", f.n0, "initial sample size (power of 2)");
    cmd->add_option("--nmax", f.nmax, "maximum sample size (power of 2)");
    cmd->add_option("--gen-vector", f.gen_vector, "generating vector file");
}

int default_dim(const std::string& integrand) {
    if (integrand == "mvn") return 2;
    if (integrand == "keister") return 4;
    if (integrand == "option") return 13;
    return 2;
}

std::string default_transform(const std::string& integrand) {
    if (integrand == "mvn") return "sidi2";
    if (integrand == "keister") return "sidi1";
    if (integrand == "option") return "baker";
    return "none";
}

engine::CubatureOptions build_options(const CommonFlags& f, double tol) {
    engine::CubatureOptions opts;
    opts.tolerance = tol;
    opts.criterion = parse_criterion(f.criterion);
    opts.kernel.order = f.kernel_r;
    const std::string tr = f.transform.empty() ? default_transform(f.integrand) : f.transform;
    opts.transform = domain::parse_transform(tr);
    opts.n0 = f.n0;
    opts.n_max = f.nmax;
    opts.seed = f.seed;
    opts.gen_vector_path = f.gen_vector;
    return opts;
}

std::string run_record(const CommonFlags& f, double eps, std::uint64_t seed,
                       const domain::IntegrandDef& integrand, const engine::CubatureResult& r,
                       double time_s) {
    double err_ratio = std::numeric_limits<double>::quiet_NaN();
    if (integrand.true_value) err_ratio = std::fabs(r.mu_hat - *integrand.true_value) / eps;
    const std::string tr = f.transform.empty() ? default_transform(f.integrand) : f.transform;
    std::ostringstream row;
    row << f.integrand << ',' << integrand.dimension << ',' << fmt(eps) << ',' << f.criterion
        << ',' << tr << ',' << f.kernel_r << ',' << seed << ',' << fmt(r.mu_hat) << ','
        << fmt(err_ratio) << ',' << r.n_used << ',' << fmt(r.half_width) << ',' << fmt(time_s)
        << ',' << (r.converged ? 1 : 0);
    return row.str();
}

int cmd_integrate(const CommonFlags& f, double tol) {
    const int d = f.dim > 0 ? f.dim : default_dim(f.integrand);
    const auto integrand = domain::builtin_integrand(f.integrand, d);
    const auto opts = build_options(f, tol);
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = engine::integrate(integrand, integrand.dimension, opts);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "mu_hat     = " << fmt(r.mu_hat) << "\n"
              << "n          = " << r.n_used << "\n"
              << "half_width = " << fmt(r.half_width) << "\n"
              << "eta_hat    = " << fmt(r.fit.eta_hat) << "\n"
              << "time_s     = " << fmt(dt) << "\n"
              << "converged  = " << (r.converged ? "yes" : "no (n_max reached)") << "\n";
    if (integrand.true_value)
        std::cout << "abs_error  = " << fmt(std::fabs(r.mu_hat - *integrand.true_value)) << "\n";
    return r.converged ? 0 : 2;
}

int cmd_sweep(const CommonFlags& f, int replicates, double tol_lo, double tol_hi,
              const std::string& out_path) {
    const int d = f.dim > 0 ? f.dim : default_dim(f.integrand);
    const auto integrand = domain::builtin_integrand(f.integrand, d);
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot open output file: " << out_path << "\n";
        return 1;
    }
    out << kCsvHeader << '\n';

    std::mt19937_64 rng(f.seed);
    std::uniform_real_distribution<double> unif(std::log(tol_lo), std::log(tol_hi));
    int hits = 0, with_truth = 0;
    for (int i = 0; i < replicates; ++i) {
        const double eps = std::exp(unif(rng));
        CommonFlags fi = f;
        fi.seed = f.seed + 1 + static_cast<std::uint64_t>(i);  // independent shifts
        auto opts = build_options(fi, eps);
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = engine::integrate(integrand, integrand.dimension, opts);
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out << run_record(fi, eps, fi.seed, integrand, r, dt) << '\n';
        if (integrand.true_value) {
            ++with_truth;
            if (std::fabs(r.mu_hat - *integrand.true_value) <= eps) ++hits;
        }
    }
    if (with_truth > 0)
        std::cout << "success rate: " << hits << "/" << with_truth << " = "
                  << fmt(static_cast<double>(hits) / with_truth) << "\n";
    else
        std::cout << "success rate: n/a (no reference value)\n";
    return 0;
}

int cmd_compare(const CommonFlags& f, const std::vector<std::uint64_t>& n_list,
                const std::string& out_path) {
    const int d = f.dim > 0 ? f.dim : default_dim(f.integrand);
    auto integrand = domain::builtin_integrand(f.integrand, d);
    const std::string tr = f.transform.empty() ? default_transform(f.integrand) : f.transform;
    const auto g = domain::periodize(integrand, domain::parse_transform(tr));

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "cannot open output file: " << out_path << "\n";
            return 1;
        }
        out = &file;
    }
    *out << "n,fast_s,generic_s,ratio\n";

    for (auto n : n_list) {
        if (!lattice::is_power_of_two(n)) {
            std::cerr << "compare: n must be a power of two, got " << n << "\n";
            return 1;
        }
        if (n > (1u << 13)) {
            std::cerr << "compare: generic path limited to n <= 2^13\n";
            return 1;
        }
        std::mt19937_64 rng(f.seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> shift(integrand.dimension);
        for (auto& s : shift) s = unif(rng);
        const auto cfg = lattice::make_config(integrand.dimension, shift, 20, f.gen_vector);
        const auto nodes = lattice::node_block(0, n, cfg);
        std::vector<double> y(n);
        for (std::uint64_t i = 0; i < n; ++i) y[i] = g.eval(nodes[i]);

        kernel::KernelSpec bernoulli;
        bernoulli.order = f.kernel_r;
        const auto crit = parse_criterion(f.criterion);
        const inference::EtaSearch search;

        auto t0 = std::chrono::steady_clock::now();
        const auto y_tilde = fbt::transform(y);
        inference::FitContext ctx{nodes, y_tilde, bernoulli};
        const auto fit = inference::fit(crit, ctx, search);
        kernel::KernelSpec fitted = bernoulli;
        fitted.eta = fit.eta_hat;
        const auto ev = fbt::eigenvalues(fitted, nodes);
        fbt::FbtState state{y.size(), y_tilde, ev.lambda, ev.lambda_ring_1, fit.eta_hat};
        volatile double w_fast = inference::credible_half_width(crit, state);
        const double fast_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        t0 = std::chrono::steady_clock::now();
        Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
        auto objective = [&](double log_eta) {
            kernel::KernelSpec spec = bernoulli;
            spec.eta = std::exp(log_eta);
            const auto p = dense::DensePosterior<double>::build(spec, nodes);
            const auto obj = dense::dense_theta_objectives(p, yv);
            return crit == inference::Criterion::GCV ? obj.gcv : obj.mle;
        };
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
        kernel::KernelSpec best = bernoulli;
        best.eta = std::exp(f1 <= f2 ? x1 : x2);
        const auto p = dense::DensePosterior<double>::build(best, nodes);
        const double tq = inference::student_t_quantile(static_cast<int>(n) - 1, 0.995);
        const auto est = dense::dense_estimators(p, yv, 2.58, tq);
        volatile double w_gen = est.err_mle;
        const double generic_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        (void)w_fast;
        (void)w_gen;

        *out << n << ',' << fmt(fast_s) << ',' << fmt(generic_s) << ','
             << fmt(generic_s / fast_s) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Automatic Bayesian cubature on rank-1 lattices"};
    app.require_subcommand(1);

    CommonFlags f_int, f_sweep, f_cmp;
    double tol = 1e-3;
    auto* integrate = app.add_subcommand("integrate", "run one integration");
    add_common(integrate, f_int);
    integrate->add_option("--tol", tol, "absolute error tolerance")
        ->check(CLI::PositiveNumber);

    int replicates = 100;
    double tol_lo = 1e-5, tol_hi = 1e-2;
    std::string sweep_out = "sweep.csv";
    auto* sweep = app.add_subcommand("sweep", "randomized-tolerance sweep, CSV output");
    add_common(sweep, f_sweep);
    sweep->add_option("--replicates", replicates, "number of runs");
    sweep->add_option("--tol-lo", tol_lo, "tolerance interval lower end")->check(CLI::PositiveNumber);
    sweep->add_option("--tol-hi", tol_hi, "tolerance interval upper end")->check(CLI::PositiveNumber);
    sweep->add_option("--out", sweep_out, "output CSV path");

    std::vector<std::uint64_t> n_list = {1u << 10};
    std::string cmp_out;
    auto* compare = app.add_subcommand("compare", "fast vs generic timings at matched n");
    add_common(compare, f_cmp);
    compare->add_option("--n-list", n_list, "sample sizes (powers of 2)")->delimiter(',');
    compare->add_option("--out", cmp_out, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
        if (integrate->parsed()) return cmd_integrate(f_int, tol);
        if (sweep->parsed()) return cmd_sweep(f_sweep, replicates, tol_lo, tol_hi, sweep_out);
        if (compare->parsed()) return cmd_compare(f_cmp, n_list, cmp_out);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
