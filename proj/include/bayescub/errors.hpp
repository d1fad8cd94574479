#pragma once

#include <stdexcept>
#include <string>

namespace bayescub {

// Eigenvalue from the fast transform came out non-positive; the kernel/eta
// combination is invalid or the computation broke down numerically.
struct NonPositiveEigenvalue : std::runtime_error {
    explicit NonPositiveEigenvalue(const std::string& what) : std::runtime_error(what) {}
};

// The transformed first kernel column kept a large imaginary part; the Gram
// matrix is not symmetric circulant as assumed.
struct ImaginaryResidue : std::runtime_error {
    explicit ImaginaryResidue(const std::string& what) : std::runtime_error(what) {}
};

// All non-constant Fourier coefficients of the data vanish (constant integrand).
struct DegenerateData : std::runtime_error {
    explicit DegenerateData(const std::string& what) : std::runtime_error(what) {}
};

// Dense Gram matrix is not numerically positive definite.
struct CholeskyFailure : std::runtime_error {
    explicit CholeskyFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bayescub
