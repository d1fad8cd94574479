// Regenerates the frozen reference values in src/domain.cpp: a 2^20-point run
// for the MVN problem and a 2^22-point run for the Asian option.

#include <cstdio>

#include "bayescub/engine.hpp"

using namespace bayescub;

namespace {

double run_once(const domain::IntegrandDef& f, domain::Transform tr, int r, std::uint64_t n) {
    engine::CubatureOptions opts;
    opts.tolerance = 1e-30;  // force the full budget
    opts.transform = tr;
    opts.kernel.order = r;
    opts.n0 = n;
    opts.n_max = n;
    opts.seed = 0;
    const auto res = engine::integrate(f, f.dimension, opts);
    return res.mu_hat;
}

}  // namespace

int main() {
    const auto mvn = domain::genz_mvn(domain::mvn_paper_problem());
    std::printf("mvn_paper_reference    = %.17g\n",
                run_once(mvn, domain::Transform::SidiC2, 2, 1u << 20));

    const auto option = domain::asian_option(domain::option_paper_problem());
    std::printf("option_paper_reference = %.17g\n",
                run_once(option, domain::Transform::Baker, 1, 1u << 22));
    return 0;
}
