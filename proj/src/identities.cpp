#include "nlslab/identities.hpp"

#include <cmath>

#include "json.hpp"
#include "nlslab/common.hpp"
#include "nlslab/fieldops.hpp"
#include "nlslab/gaussian.hpp"
#include "nlslab/grid.hpp"
#include "nlslab/potential.hpp"

namespace nlslab {
namespace {

using json = nlohmann::json;

// Coarse residuals at or below this are treated as roundoff; no refinement
// improvement is demanded of them.
constexpr double kRefineFloor = 1.0e-10;

double rel_l2(const ComplexField& got, const ComplexField& want) {
    const double ref = want.norm_l2();
    if (ref <= 0.0) throw domain_error("identity case reference field vanishes");
    return l2_distance(got, want) / ref;
}

void finish(IdentityCase& c) {
    c.pass = std::isfinite(c.residual) && c.residual < c.threshold;
    c.refines = (c.residual_coarse <= kRefineFloor) || (c.residual < c.residual_coarse);
}

ComplexGaussian packet(double width, double center, double momentum) {
    ComplexGaussian g;
    g.dim = 1;
    g.amplitude = 1.0;
    g.center = {center, 0.0};
    g.momentum = {momentum, 0.0};
    g.width = width;
    return g;
}

// MDFM with sigma == 0 (zeta1 = 1, zeta2 = t, zeta2' = 1) must reproduce the
// free propagator. No admitted-but-underresolved scene exists for this
// operator: its dilation stage maps frequency content to position zeta2*xi,
// so anything near the coarse Nyquist lands outside a box the chirp admission
// allows (zeta1 >= 1 forces the bound). Both levels sit at roundoff; the
// refinement demonstration lives in the lens case instead.
IdentityCase case_mdfm_free() {
    IdentityCase c;
    c.name = "mdfm_sigma_zero_vs_free";
    c.n_coarse = 128;
    c.n_fine = 512;
    const double t = 1.0;
    const ComplexGaussian f = packet(1.6, 0.5, 2.5);
    const ComplexGaussian want = gauss::U(f, t);
    auto run = [&](int n) {
        const SpectralGrid grid = SpectralGrid::make1d(n, 24.0);
        return rel_l2(mdfm_apply(f.evaluate(grid), 1.0, t, 1.0), want.evaluate(grid));
    };
    c.residual_coarse = run(c.n_coarse);
    c.residual = run(c.n_fine);
    finish(c);
    return c;
}

// MDFM against the closed-form Gaussian image of M(z2/z2') D(z2) F M(z2/z1)
// with the fundamental pair of an inverse-square potential, evaluated past
// the matching radius.
IdentityCase case_mdfm_inverse_square() {
    IdentityCase c;
    c.name = "mdfm_inverse_square_vs_oracle";
    c.n_coarse = 256;
    c.n_fine = 1024;
    const FundamentalPair pair = integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 8.0);
    const ZetaSample s = pair.value_at(5.0);
    const ComplexGaussian f = packet(1.0, 0.0, 0.0);
    const ComplexGaussian want = gauss::propagate(
        f, {gauss::op_M(s.z2 / s.z1), gauss::op_F(), gauss::op_D(s.z2), gauss::op_M(s.z2 / s.z2p)});
    auto run = [&](int n) {
        const SpectralGrid grid = SpectralGrid::make1d(n, 64.0);
        return rel_l2(mdfm_apply(f.evaluate(grid), s.z1, s.z2, s.z2p), want.evaluate(grid));
    };
    c.residual_coarse = run(c.n_coarse);
    c.residual = run(c.n_fine);
    finish(c);
    return c;
}

// The suite's refinement demonstration. The lens free factor adds a
// frequency-proportional displacement to the packet's original position
// instead of replacing it, so a packet parked at negative x can carry
// spectral content near the coarse Nyquist while every stage stays inside
// the box and every admission guard passes. The coarse residual is then
// honest aliasing; the fine grid removes it.
IdentityCase case_lens() {
    IdentityCase c;
    c.name = "lens_commutation";
    c.n_coarse = 256;
    c.n_fine = 1024;
    const double a = 0.3;
    const double b = 0.4;
    const ComplexGaussian f = packet(1.0, -6.0, 18.0);
    const LensResiduals coarse = lens_identity_residual(a, b, f, SpectralGrid::make1d(c.n_coarse, 36.0));
    const LensResiduals fine = lens_identity_residual(a, b, f, SpectralGrid::make1d(c.n_fine, 36.0));
    c.residual_coarse = coarse.corrected;
    c.residual = fine.corrected;
    c.alt_phase_residual = fine.displayed;
    finish(c);
    return c;
}

IdentityCase case_factorization(const std::string& name, int order, double z1, double z2,
                                double z2p, const ComplexGaussian& f, double length,
                                int n_coarse, int n_fine) {
    IdentityCase c;
    c.name = name;
    c.n_coarse = n_coarse;
    c.n_fine = n_fine;
    c.residual_coarse =
        factorization_residual(order, z1, z2, z2p, f, SpectralGrid::make1d(n_coarse, length));
    c.residual = factorization_residual(order, z1, z2, z2p, f, SpectralGrid::make1d(n_fine, length));
    finish(c);
    return c;
}

void append_mdfm(std::vector<IdentityCase>& out) {
    out.push_back(case_mdfm_free());
    out.push_back(case_mdfm_inverse_square());
}

void append_lens(std::vector<IdentityCase>& out) { out.push_back(case_lens()); }

void append_factorization(std::vector<IdentityCase>& out) {
    // Free cases: zeta1 = 1, zeta2 = s, zeta2' = 1 at s = 2. Unlike the mdfm
    // and lens families, no admitted-but-underresolved scene exists here: the
    // chirp admission bound grows with the box-edge frequency, which already
    // exceeds any packet momentum the dilation stage can contain. Both levels
    // therefore sit at roundoff and the refinement clause is exempt.
    out.push_back(case_factorization("factorization_free_n2", 2, 1.0, 2.0, 1.0,
                                     packet(1.0, 0.0, 0.5), 40.0, 1024, 2048));
    out.push_back(case_factorization("factorization_free_n3", 3, 1.0, 2.0, 1.0,
                                     packet(0.67, 0.0, 0.25), 60.0, 4096, 8192));
    // Inverse-square case past the matching radius; zeta values from the
    // integrated fundamental pair.
    const FundamentalPair pair = integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 4.0);
    const ZetaSample s = pair.value_at(2.0);
    out.push_back(case_factorization("factorization_inverse_square_n2", 2, s.z1, s.z2, s.z2p,
                                     packet(1.0, 0.0, 0.3), 48.0, 1024, 2048));
    out.push_back(case_factorization("factorization_inverse_square_n3", 3, s.z1, s.z2, s.z2p,
                                     packet(0.59, 0.0, 0.25), 76.0, 8192, 16384));
}

}  // namespace

IdentitySuite run_identity_suite(const std::string& which) {
    IdentitySuite suite;
    const bool all = which == "all";
    if (!all && which != "mdfm" && which != "lens" && which != "factorization") {
        throw domain_error("unknown identity suite '" + which +
                           "'; expected mdfm, lens, factorization, or all");
    }
    if (all || which == "mdfm") append_mdfm(suite.cases);
    if (all || which == "lens") append_lens(suite.cases);
    if (all || which == "factorization") append_factorization(suite.cases);
    suite.all_pass = true;
    for (const IdentityCase& c : suite.cases) suite.all_pass = suite.all_pass && c.pass && c.refines;
    return suite;
}

std::string identity_suite_json(const IdentitySuite& suite) {
    json cases = json::array();
    for (const IdentityCase& c : suite.cases) {
        json j{{"name", c.name},
               {"n_coarse", c.n_coarse},
               {"n_fine", c.n_fine},
               {"residual_coarse", c.residual_coarse},
               {"residual", c.residual},
               {"threshold", c.threshold},
               {"pass", c.pass},
               {"refines", c.refines}};
        if (c.alt_phase_residual != 0.0) j["displayed_phase_residual"] = c.alt_phase_residual;
        cases.push_back(std::move(j));
    }
    json doc{{"cases", std::move(cases)}, {"all_pass", suite.all_pass}};
    return doc.dump(2) + "\n";
}

}  // namespace nlslab
