#include "bayescub/fbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bayescub/errors.hpp"
#include "bayescub/lattice.hpp"

namespace bayescub::fbt {

namespace {

template <typename S>
void fft_inplace(std::vector<std::complex<S>>& b, Direction direction) {
    const std::size_t n = b.size();
    // bit-reversal reorder
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(b[i], b[j]);
    }
    const S sign = direction == Direction::Forward ? S(-1) : S(1);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const S ang = sign * S(2) * std::numbers::pi_v<S> / static_cast<S>(len);
        const std::complex<S> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<S> w(S(1), S(0));
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = b[i + j];
                const auto v = b[i + j + len / 2] * w;
                b[i + j] = u + v;
                b[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (direction == Direction::Inverse)
        for (auto& z : b) z /= static_cast<S>(n);
}

}  // namespace

cvec fft_radix2(cvec b, Direction direction) {
    if (!lattice::is_power_of_two(b.size()))
        throw std::invalid_argument("fft_radix2: length must be a power of two");
    fft_inplace(b, direction);
    return b;
}

cvec transform(const std::vector<double>& b) {
    const std::size_t n = b.size();
    const auto perm = lattice::lattice_permutation(n);
    cvec a(n);
    // (P^T b)_j = b[rev(j)]; the bit-reversal permutation is an involution,
    // and V^H b = P * DFT(P^T b) needs the same reordering on the way out.
    for (std::size_t j = 0; j < n; ++j) a[j] = b[perm[j]];
    a = fft_radix2(std::move(a), Direction::Forward);
    cvec out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = a[perm[j]];
    return out;
}

Eigenvalues eigenvalues(const kernel::KernelSpec& spec,
                        const std::vector<std::vector<double>>& nodes) {
    if (spec.family != kernel::Family::ShiftInvariantBernoulli)
        throw std::invalid_argument("fbt::eigenvalues: shift-invariant kernel required");
    const std::size_t n = nodes.size();
    const auto perm = lattice::lattice_permutation(n);

    // the smallest eigenvalues sit many orders of magnitude below ||C||, so
    // a double-precision transform would drown them in summation noise
    // (~eps * sum |col|); the column and its FFT run in long double instead
    std::vector<long double> col(n);
    long double col_abs_sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        col[i] = kernel::centered_eval_t<long double>(spec, nodes[i], nodes[0]);
        col_abs_sum += std::fabs(col[i]);
    }
    std::vector<std::complex<long double>> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = col[perm[j]];
    fft_inplace(a, Direction::Forward);

    long double max_re = 0.0L, max_im = 0.0L;
    for (const auto& z : a) {
        max_re = std::max(max_re, std::fabs(z.real()));
        max_im = std::max(max_im, std::fabs(z.imag()));
    }
    if (max_re > 0.0L && max_im / max_re > 1e-8L)
        throw ImaginaryResidue("fbt::eigenvalues: imaginary residue " +
                               std::to_string(static_cast<double>(max_im / max_re)));

    Eigenvalues out;
    out.lambda_ring_1 = static_cast<double>(a[0].real());  // perm fixes index 0
    // lambda_ring_1 > 0 holds in exact arithmetic, but for large n its true
    // value can sit below even the long double summation noise; clamp to the
    // noise level rather than letting roundoff flip its sign
    const double ring_floor =
        static_cast<double>(std::numeric_limits<long double>::epsilon() * col_abs_sum *
                            (1.0L + static_cast<long double>(std::log2(double(n)))));
    if (out.lambda_ring_1 < -1e3 * ring_floor)
        throw NonPositiveEigenvalue("fbt::eigenvalues: lambda_ring_1 = " +
                                    std::to_string(out.lambda_ring_1));
    if (out.lambda_ring_1 < ring_floor) out.lambda_ring_1 = ring_floor;
    out.lambda.resize(n);
    out.lambda[0] = out.lambda_ring_1 + static_cast<double>(n);
    for (std::size_t i = 1; i < n; ++i) out.lambda[i] = static_cast<double>(a[perm[i]].real());
    const double floor = -1e3 * ring_floor;
    for (std::size_t i = 0; i < n; ++i) {
        if (out.lambda[i] < floor)
            throw NonPositiveEigenvalue("fbt::eigenvalues: lambda[" + std::to_string(i) +
                                        "] = " + std::to_string(out.lambda[i]));
        if (out.lambda[i] <= 0.0) out.lambda[i] = ring_floor;  // clamp roundoff-level negatives
    }
    return out;
}

}  // namespace bayescub::fbt
