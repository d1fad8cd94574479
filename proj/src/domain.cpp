#include "bayescub/domain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bayescub::domain {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

Transform parse_transform(const std::string& s) {
    if (s == "none") return Transform::None;
    if (s == "baker") return Transform::Baker;
    if (s == "sidi1") return Transform::SidiC1;
    if (s == "sidi2") return Transform::SidiC2;
    throw std::invalid_argument("unknown transform: " + s);
}

std::string transform_name(Transform t) {
    switch (t) {
        case Transform::None: return "none";
        case Transform::Baker: return "baker";
        case Transform::SidiC1: return "sidi1";
        case Transform::SidiC2: return "sidi2";
    }
    return "?";
}

double baker(double x) { return 1.0 - 2.0 * std::fabs(x - 0.5); }

std::pair<double, double> sidi_c1(double x) {
    return {x - std::sin(2.0 * kPi * x) / (2.0 * kPi), 1.0 - std::cos(2.0 * kPi * x)};
}

std::pair<double, double> sidi_c2(double x) {
    const double psi = (8.0 - 9.0 * std::cos(kPi * x) + std::cos(3.0 * kPi * x)) / 16.0;
    const double dpsi = 3.0 * kPi * (3.0 * std::sin(kPi * x) - std::sin(3.0 * kPi * x)) / 16.0;
    return {psi, dpsi};
}

IntegrandDef periodize(const IntegrandDef& f, Transform kind) {
    if (kind == Transform::None) return f;
    IntegrandDef out = f;
    out.name = f.name + "+" + transform_name(kind);
    if (kind == Transform::Baker) {
        auto inner = f.eval;
        out.eval = [inner](std::span<const double> x) {
            std::vector<double> t(x.size());
            for (std::size_t l = 0; l < x.size(); ++l) t[l] = baker(x[l]);
            return inner(t);
        };
        return out;
    }
    auto psi = kind == Transform::SidiC1 ? sidi_c1 : sidi_c2;
    auto inner = f.eval;
    out.eval = [inner, psi](std::span<const double> x) {
        std::vector<double> t(x.size());
        double weight = 1.0;
        for (std::size_t l = 0; l < x.size(); ++l) {
            const auto [p, dp] = psi(x[l]);
            t[l] = p;
            weight *= dp;
        }
        // the weight vanishes at the faces; skip g there so endpoint
        // singularities of g cannot produce NaN * 0
        if (weight == 0.0) return 0.0;
        return inner(t) * weight;
    };
    return out;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

namespace {

// Rational approximation for the Gaussian inverse CDF (Acklam).
double norm_inv_cdf_approx(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }
    const double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double norm_inv_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("norm_inv_cdf: p must be in (0,1)");
    double x = norm_inv_cdf_approx(p);
    // one Newton step on Phi
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    if (pdf > 0.0) x -= (norm_cdf(x) - p) / pdf;
    return x;
}

void MvnProblem::validate() const {
    const std::size_t d = a.size();
    if (d == 0 || b.size() != d || L.size() != d)
        throw std::invalid_argument("MvnProblem: inconsistent sizes");
    for (std::size_t j = 0; j < d; ++j) {
        if (!(a[j] < b[j])) throw std::invalid_argument("MvnProblem: need a < b componentwise");
        if (L[j].size() != d) throw std::invalid_argument("MvnProblem: L must be d x d");
        if (!(L[j][j] > 0.0)) throw std::invalid_argument("MvnProblem: L diagonal must be positive");
    }
}

IntegrandDef genz_mvn(const MvnProblem& problem) {
    problem.validate();
    const int dp = static_cast<int>(problem.a.size());
    IntegrandDef f;
    f.dimension = std::max(dp - 1, 1);
    f.name = "mvn";
    auto phi_of = [](double bound, double scale) {
        if (bound == -kInf) return 0.0;
        if (bound == kInf) return 1.0;
        return norm_cdf(bound / scale);
    };
    f.eval = [problem, dp, phi_of](std::span<const double> x) {
        double alpha = phi_of(problem.a[0], problem.L[0][0]);
        double beta = phi_of(problem.b[0], problem.L[0][0]);
        double prod = beta - alpha;
        std::vector<double> z(dp - 1);
        for (int j = 1; j < dp; ++j) {
            double p = alpha + x[j - 1] * (beta - alpha);
            p = std::clamp(p, 1e-300, 1.0 - 1e-16);
            z[j - 1] = norm_inv_cdf(p);
            double s = 0.0;
            for (int k = 0; k < j; ++k) s += problem.L[j][k] * z[k];
            const double ljj = problem.L[j][j];
            alpha = problem.a[j] == -kInf ? 0.0 : norm_cdf((problem.a[j] - s) / ljj);
            beta = problem.b[j] == kInf ? 1.0 : norm_cdf((problem.b[j] - s) / ljj);
            prod *= beta - alpha;
        }
        return prod;
    };
    return f;
}

MvnProblem mvn_paper_problem() {
    MvnProblem p;
    p.a = {-6.0, -2.0, -2.0};
    p.b = {5.0, 2.0, 1.0};
    p.L = {{4.0, 0.0, 0.0}, {1.0, 1.0, 0.0}, {1.0, 0.5, 0.25}};
    return p;
}

double mvn_paper_reference() {
    // frozen from a fast-path run at n = 2^20 (see tools/freeze_references)
    return 0.6763373243579216;
}

IntegrandDef keister(int d) {
    if (d < 1) throw std::invalid_argument("keister: d must be >= 1");
    IntegrandDef f;
    f.dimension = d;
    f.name = "keister";
    f.true_value = keister_true(d);
    const double scale = std::pow(kPi, 0.5 * d);
    // t = z/sqrt(2) maps exp(-|t|^2) dt onto the standard Gaussian measure
    f.eval = [scale](std::span<const double> x) {
        double norm2 = 0.0;
        for (double xl : x) {
            const double z = norm_inv_cdf(std::clamp(xl, 1e-300, 1.0 - 1e-16));
            norm2 += 0.5 * z * z;
        }
        return scale * std::cos(std::sqrt(norm2));
    };
    return f;
}

double keister_true(int d) {
    if (d < 1) throw std::invalid_argument("keister_true: d must be >= 1");
    std::vector<double> ic(d + 1, 0.0), is(d + 1, 0.0);
    ic[1] = std::sqrt(kPi) / (2.0 * std::exp(0.25));
    is[1] = 0.4244363835020225;
    if (d >= 2) {
        ic[2] = (1.0 - is[1]) / 2.0;
        is[2] = ic[1] / 2.0;
    }
    for (int j = 3; j <= d; ++j) {
        ic[j] = ((j - 2) * ic[j - 2] - is[j - 1]) / 2.0;
        is[j] = ((j - 2) * is[j - 2] + ic[j - 1]) / 2.0;
    }
    return 2.0 * std::pow(kPi, 0.5 * d) * ic[d] / std::tgamma(0.5 * d);
}

void OptionProblem::validate() const {
    if (!(maturity > 0.0 && steps >= 1 && spot > 0.0 && volatility > 0.0 && strike >= 0.0))
        throw std::invalid_argument("OptionProblem: parameters must be positive");
}

IntegrandDef asian_option(const OptionProblem& problem) {
    problem.validate();
    const int d = problem.steps;
    const double dt = problem.maturity / d;

    // Sigma_jk = dt * min(j,k); PCA factor with eigenvalues sorted descending.
    Eigen::MatrixXd sigma(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) sigma(j, k) = dt * std::min(j + 1, k + 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    Eigen::MatrixXd factor(d, d);
    for (int i = 0; i < d; ++i) {
        const int src = d - 1 - i;  // eigenvalues come back ascending
        factor.col(i) = es.eigenvectors().col(src) * std::sqrt(std::max(es.eigenvalues()(src), 0.0));
    }

    IntegrandDef f;
    f.dimension = d;
    f.name = "option";
    const double drift = problem.rate - 0.5 * problem.volatility * problem.volatility;
    const double disc = std::exp(-problem.rate * problem.maturity);
    f.eval = [factor, problem, d, dt, drift, disc](std::span<const double> x) {
        Eigen::VectorXd u(d);
        for (int j = 0; j < d; ++j)
            u(j) = norm_inv_cdf(std::clamp(x[j], 1e-300, 1.0 - 1e-16));
        const Eigen::VectorXd w = factor * u;  // Brownian path, cov Sigma
        double avg = 0.0;
        for (int j = 0; j < d; ++j)
            avg += problem.spot * std::exp(drift * (j + 1) * dt + problem.volatility * w(j));
        avg /= d;
        return std::max(avg - problem.strike, 0.0) * disc;
    };
    return f;
}

OptionProblem option_paper_problem() { return OptionProblem{}; }

double option_paper_reference() {
    // frozen from a fast-path run at n = 2^22 (see tools/freeze_references)
    return 6.3697214769917299;
}

IntegrandDef builtin_integrand(const std::string& name, int d) {
    if (name == "mvn") {
        auto f = genz_mvn(mvn_paper_problem());
        f.true_value = mvn_paper_reference();
        return f;
    }
    if (name == "keister") return keister(d);
    if (name == "option") {
        OptionProblem p = option_paper_problem();
        p.steps = d;
        auto f = asian_option(p);
        if (d == option_paper_problem().steps) f.true_value = option_paper_reference();
        return f;
    }
    throw std::invalid_argument("unknown integrand: " + name);
}

}  // namespace bayescub::domain
