#pragma once

#include <complex>
#include <vector>

#include "bayescub/kernel.hpp"

namespace bayescub::fbt {

using cvec = std::vector<std::complex<double>>;

enum class Direction { Forward, Inverse };

// Radix-2 DFT.  Forward is unnormalized, inverse carries the 1/n factor.
cvec fft_radix2(cvec b, Direction direction);

// Fast Bayesian transform of real data given in van der Corput node order:
// bit-reversal permute into natural lattice order, then the conjugated DFT.
// The first output entry equals sum(b).
cvec transform(const std::vector<double>& b);

struct Eigenvalues {
    std::vector<double> lambda;  // eigenvalues of the Gram matrix C
    double lambda_ring_1;        // top eigenvalue of C - 11^T, = lambda[0] - n
};

// Eigenvalues of the Gram matrix via the transform of the centered first
// column.  Throws NonPositiveEigenvalue / ImaginaryResidue on breakdown.
Eigenvalues eigenvalues(const kernel::KernelSpec& spec,
                        const std::vector<std::vector<double>>& nodes);

// Transformed data plus eigenvalues at the kernel scale they were computed with.
struct FbtState {
    std::size_t n = 0;
    cvec y_tilde;
    std::vector<double> lambda;
    double lambda_ring_1 = 0.0;
    double eta = 0.0;
};

}  // namespace bayescub::fbt
