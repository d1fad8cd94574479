#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "bayescub/errors.hpp"
#include "bayescub/kernel.hpp"

namespace bayescub::dense {

// O(n^3) posterior algebra over an explicit Gram matrix.  Scalar is double in
// production and long double when used as the correctness oracle.
template <typename Scalar>
struct DensePosterior {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Mat gram;
    Vec c_vec;
    Scalar c0;
    Eigen::LLT<Mat> chol;
    Scalar logdet;

    static DensePosterior build(const kernel::KernelSpec& spec,
                                const std::vector<std::vector<double>>& nodes,
                                double jitter = 0.0) {
        const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
        const int d = static_cast<int>(nodes.front().size());
        DensePosterior p;
        p.gram.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) {
                const Scalar v = kernel::kernel_eval_t<Scalar>(spec, nodes[i], nodes[j]);
                p.gram(i, j) = v;
                p.gram(j, i) = v;
            }
        if (jitter > 0.0) p.gram.diagonal().array() += static_cast<Scalar>(jitter);
        const auto integrals = kernel::kernel_mean_integrals(spec, d);
        p.c0 = static_cast<Scalar>(integrals.c0);
        p.c_vec.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            p.c_vec(i) = static_cast<Scalar>(integrals.c_fn(nodes[i]));
        p.chol.compute(p.gram);
        if (p.chol.info() != Eigen::Success)
            throw CholeskyFailure("dense: Gram matrix not positive definite at n = " +
                                  std::to_string(n));
        p.logdet = Scalar(0);
        for (Eigen::Index i = 0; i < n; ++i)
            p.logdet += Scalar(2) * std::log(p.chol.matrixLLT()(i, i));
        return p;
    }
};

template <typename Scalar>
struct DenseEstimates {
    Scalar m_mle, m_gcv;
    Scalar s2_mle, sigma2_full, s2_gcv;
    Scalar mu_mle, mu_gcv;
    Scalar err_mle, err_full, err_gcv;  // half-widths; err_full needs t-quantile
    Scalar posterior_sd2;               // c0 - c^T C^{-1} c
};

// All Theorem-1 quantities via triangular solves.  `t_quantile` is
// t_{n-1,0.995} (or another level); `quantile` the Gaussian 2.58 default.
template <typename Scalar>
DenseEstimates<Scalar> dense_estimators(const DensePosterior<Scalar>& p,
                                        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                                        Scalar quantile, Scalar t_quantile) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index n = p.gram.rows();
    const Vec ones = Vec::Ones(n);
    const Vec z = p.chol.solve(y);        // C^{-1} y
    const Vec u = p.chol.solve(ones);     // C^{-1} 1
    const Vec w = p.chol.solve(p.c_vec);  // C^{-1} c

    const Scalar oty = ones.dot(z), otu = ones.dot(u);
    const Scalar uty = u.dot(z), utu = u.dot(u);
    const Scalar ctz = p.c_vec.dot(z), ctu = p.c_vec.dot(u), ctw = p.c_vec.dot(w);
    const Scalar yty = y.dot(z);

    DenseEstimates<Scalar> e;
    e.m_mle = oty / otu;
    e.m_gcv = uty / utu;
    const Scalar centered = yty - oty * oty / otu;  // y^T [C^{-1} - ...] y
    e.s2_mle = centered / Scalar(n);
    e.posterior_sd2 = p.c0 - ctw;
    e.sigma2_full = centered / Scalar(n - 1) *
                    ((Scalar(1) - ctu) * (Scalar(1) - ctu) / otu + e.posterior_sd2);

    // trace(C^{-1}) = sum of squared column norms of L^{-1}
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat linv = Mat::Identity(n, n);
    p.chol.matrixL().solveInPlace(linv);
    const Scalar trace_cinv = linv.squaredNorm();

    const Scalar centered2 = y.dot(p.chol.solve(z)) - uty * uty / utu;  // y^T [C^{-2} - ...] y
    e.s2_gcv = centered2 / trace_cinv;

    e.mu_mle = (Scalar(1) - ctu) * oty / otu + ctz;
    e.mu_gcv = (Scalar(1) - ctu) * uty / utu + ctz;

    const Scalar root = std::sqrt(std::max(e.posterior_sd2, Scalar(0)));
    e.err_mle = quantile * std::sqrt(std::max(e.s2_mle, Scalar(0))) * root;
    e.err_gcv = quantile * std::sqrt(std::max(e.s2_gcv, Scalar(0))) * root;
    e.err_full = t_quantile * std::sqrt(std::max(e.sigma2_full, Scalar(0)));
    return e;
}

template <typename Scalar>
struct DenseObjectives {
    Scalar mle;
    Scalar gcv;
};

// Hyperparameter objectives on the dense path.  The GCV objective follows the
// fast-transform form: -2 log(trace(C^{-1})).
template <typename Scalar>
DenseObjectives<Scalar> dense_theta_objectives(const DensePosterior<Scalar>& p,
                                               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index n = p.gram.rows();
    if (n < 2) throw DegenerateData("dense_theta_objectives: need n >= 2");
    const Vec ones = Vec::Ones(n);
    const Vec z = p.chol.solve(y);
    const Vec u = p.chol.solve(ones);
    const Scalar oty = ones.dot(z), otu = ones.dot(u);
    const Scalar centered = y.dot(z) - oty * oty / otu;
    if (!(centered > Scalar(0)))
        throw DegenerateData("dense_theta_objectives: constant integrand data");

    DenseObjectives<Scalar> obj;
    obj.mle = std::log(centered) + p.logdet / Scalar(n);

    Mat linv = Mat::Identity(n, n);
    p.chol.matrixL().solveInPlace(linv);
    const Scalar trace_cinv = linv.squaredNorm();
    const Scalar uty = u.dot(z), utu = u.dot(u);
    const Scalar centered2 = y.dot(p.chol.solve(z)) - uty * uty / utu;
    obj.gcv = std::log(centered2) - Scalar(2) * std::log(trace_cinv);
    return obj;
}

}  // namespace bayescub::dense
