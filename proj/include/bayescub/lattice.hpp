#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bayescub::lattice {

// Shifted extensible rank-1 lattice: x_i = h * phi(i-1) + shift mod 1, where
// phi is the van der Corput sequence.  Supports up to 2^max_log2n nodes.
struct LatticeConfig {
    std::vector<std::uint64_t> generating_vector;  // odd positive integers, one per dimension
    std::vector<double> shift;                     // components in [0,1)
    int dimension = 1;
    int max_log2n = 20;

    void validate() const;  // throws std::invalid_argument on violated invariants
};

// phi(i): binary digits of i reflected about the radix point.
double van_der_corput(std::uint64_t i);

// i-th node of the sequence, 1-based.
std::vector<double> node(std::uint64_t i, const LatticeConfig& cfg);

// Nodes with indices n_prev+1 .. n (van der Corput order).  n_prev must be 0
// or a power of two less than n; n must be a power of two.
std::vector<std::vector<double>> node_block(std::uint64_t n_prev, std::uint64_t n,
                                            const LatticeConfig& cfg);

// p[i] = n*phi(i): the bit-reversal permutation on {0,...,n-1}.
std::vector<std::uint32_t> lattice_permutation(std::uint64_t n);

bool is_power_of_two(std::uint64_t n);

// Default generating vector shipped with the library (valid to d = 20,
// n = 2^20, from a published lattice-rule table).
const std::vector<std::uint64_t>& default_generating_vector();

// Plain-text generating vector file: line 1 = d_max, then one odd integer per line.
std::vector<std::uint64_t> load_generating_vector(const std::string& path);

// Builds a config for dimension d with the given shift source.  Uses the
// default vector unless `gen_vector_path` is non-empty.
LatticeConfig make_config(int d, const std::vector<double>& shift, int max_log2n,
                          const std::string& gen_vector_path = {});

}  // namespace bayescub::lattice
