#include "bayescub/lattice.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace bayescub::lattice {

bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

void LatticeConfig::validate() const {
    if (dimension < 1) throw std::invalid_argument("lattice: dimension must be >= 1");
    if (max_log2n < 1 || max_log2n > 26)
        throw std::invalid_argument("lattice: max_log2n must be in [1,26]");
    if (static_cast<int>(generating_vector.size()) < dimension)
        throw std::invalid_argument("lattice: generating vector shorter than dimension");
    if (static_cast<int>(shift.size()) != dimension)
        throw std::invalid_argument("lattice: shift length != dimension");
    for (int k = 0; k < dimension; ++k) {
        if (generating_vector[k] == 0 || generating_vector[k] % 2 == 0)
            throw std::invalid_argument("lattice: generating vector entries must be odd positive");
        if (!(shift[k] >= 0.0 && shift[k] < 1.0))
            throw std::invalid_argument("lattice: shift components must lie in [0,1)");
    }
}

namespace {

// Reverse the low `bits` bits of v.
std::uint64_t reverse_bits(std::uint64_t v, int bits) {
    std::uint64_t r = 0;
    for (int b = 0; b < bits; ++b) {
        r = (r << 1) | (v & 1u);
        v >>= 1;
    }
    return r;
}

}  // namespace

double van_der_corput(std::uint64_t i) {
    if (i >= (std::uint64_t{1} << 53)) throw std::invalid_argument("van_der_corput: index too large");
    if (i == 0) return 0.0;
    const int bits = 64 - std::countl_zero(i);
    const std::uint64_t r = reverse_bits(i, bits);
    return static_cast<double>(r) / static_cast<double>(std::uint64_t{1} << bits);
}

std::vector<double> node(std::uint64_t i, const LatticeConfig& cfg) {
    if (i < 1 || i > (std::uint64_t{1} << cfg.max_log2n))
        throw std::out_of_range("lattice::node: index out of supported range");
    const int m = cfg.max_log2n;
    const std::uint64_t two_m = std::uint64_t{1} << m;
    // phi(i-1) = rev_m(i-1) / 2^m, computed as integers so h*phi mod 1 is exact.
    const std::uint64_t r = reverse_bits(i - 1, m);
    std::vector<double> x(cfg.dimension);
    for (int k = 0; k < cfg.dimension; ++k) {
        const std::uint64_t num = (cfg.generating_vector[k] * r) & (two_m - 1);
        double v = static_cast<double>(num) / static_cast<double>(two_m) + cfg.shift[k];
        if (v >= 1.0) v -= 1.0;
        x[k] = v;
    }
    return x;
}

std::vector<std::vector<double>> node_block(std::uint64_t n_prev, std::uint64_t n,
                                            const LatticeConfig& cfg) {
    if (!is_power_of_two(n) || (n_prev != 0 && !is_power_of_two(n_prev)))
        throw std::invalid_argument("lattice::node_block: sizes must be powers of two");
    if (n_prev >= n) throw std::invalid_argument("lattice::node_block: n_prev must be < n");
    std::vector<std::vector<double>> out;
    out.reserve(n - n_prev);
    for (std::uint64_t i = n_prev + 1; i <= n; ++i) out.push_back(node(i, cfg));
    return out;
}

std::vector<std::uint32_t> lattice_permutation(std::uint64_t n) {
    if (!is_power_of_two(n) || n > (std::uint64_t{1} << 26))
        throw std::invalid_argument("lattice_permutation: n must be a power of two <= 2^26");
    const int k = std::countr_zero(n);
    std::vector<std::uint32_t> p(n);
    for (std::uint64_t i = 0; i < n; ++i)
        p[i] = static_cast<std::uint32_t>(reverse_bits(i, k));
    return p;
}

const std::vector<std::uint64_t>& default_generating_vector() {
    // Base-2 extensible lattice generating vector, good to d = 20 and n = 2^20.
    static const std::vector<std::uint64_t> h = {
        1,      182667, 469891, 498753, 110745, 446247, 250185,
        118627, 245333, 283199, 408519, 391023, 246327, 126539,
        399185, 461527, 300343, 69681,  516695, 436179};
    return h;
}

std::vector<std::uint64_t> load_generating_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open generating vector file: " + path);
    std::size_t d_max = 0;
    if (!(in >> d_max) || d_max == 0)
        throw std::runtime_error("generating vector file: bad first line: " + path);
    std::vector<std::uint64_t> h(d_max);
    for (std::size_t k = 0; k < d_max; ++k) {
        if (!(in >> h[k])) throw std::runtime_error("generating vector file truncated: " + path);
        if (h[k] == 0 || h[k] % 2 == 0)
            throw std::runtime_error("generating vector file: entries must be odd positive");
    }
    return h;
}

LatticeConfig make_config(int d, const std::vector<double>& shift, int max_log2n,
                          const std::string& gen_vector_path) {
    LatticeConfig cfg;
    std::string path = gen_vector_path;
    if (path.empty()) {
        if (const char* env = std::getenv("BAYESCUB_GEN_VECTOR")) path = env;
    }
    cfg.generating_vector = path.empty() ? default_generating_vector() : load_generating_vector(path);
    cfg.shift = shift;
    // snap shifts to the 2^-32 grid: lattice points are multiples of 2^-max_log2n,
    // so point + shift (and its mod-1 wrap) stays exactly representable and the
    // Gram matrix is exactly circulant in the stored node doubles
    for (auto& s : cfg.shift) {
        s = std::ldexp(std::round(std::ldexp(s, 32)), -32);
        if (s >= 1.0) s = 1.0 - std::ldexp(1.0, -32);
        if (s < 0.0) s = 0.0;
    }
    cfg.dimension = d;
    cfg.max_log2n = max_log2n;
    cfg.validate();
    return cfg;
}

}  // namespace bayescub::lattice
