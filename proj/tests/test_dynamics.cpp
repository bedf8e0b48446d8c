#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "nlslab/dynamics.hpp"

using namespace nlslab;

namespace {

// Datum concentrated in frequency (sigma_xi = 0.1) so the dilated profile
// stays a few widths wide in x even at the top of the time window.
FinalData narrow_data(double amplitude = 0.2) {
    ComplexGaussian g;
    g.dim = 1;
    g.amplitude = cplx(amplitude, 0.0);
    g.center = {0.25, 0.0};
    g.momentum = {0.0, 0.0};
    g.width = cplx(100.0, 0.0);
    return make_gaussian_final_data(g);
}

ComplexGaussian packet(double width, double center, double momentum) {
    ComplexGaussian g;
    g.dim = 1;
    g.width = width;
    g.center = {center, 0.0};
    g.momentum = {momentum, 0.0};
    return g;
}

std::vector<gauss::Op> mdfm_chain(const ZetaSample& s) {
    return {gauss::op_M(s.z2 / s.z1), gauss::op_F(), gauss::op_D(s.z2),
            gauss::op_M(s.z2 / s.z2p)};
}

SolverConfig base_config(std::shared_ptr<const FundamentalPair> pair, double lambda,
                         const PeriodicSymbol& sym, const SpectralGrid& grid, double t0,
                         double t1, double dt) {
    SolverConfig cfg;
    cfg.grid = grid;
    cfg.pair = std::move(pair);
    cfg.symbol = sym;
    cfg.nl = make_nl_params(1, lambda, 0.1);
    cfg.symbol.p_c = cfg.nl.p_c;
    cfg.table = fourier_coefficients(cfg.symbol, 16);
    cfg.data = narrow_data();
    cfg.pp = make_profile_params(cfg.table.coeff(1).real(), 1.0, cfg.nl.p_c);
    cfg.t0 = t0;
    cfg.t1 = t1;
    cfg.dt = dt;
    return cfg;
}

}  // namespace

TEST_CASE("with everything switched off the stepper is the exact free flow") {
    auto pair = std::make_shared<const FundamentalPair>(
        integrate_fundamental(make_zero_potential(), 40.0));
    const SpectralGrid grid = SpectralGrid::make1d(512, 64.0);
    SolverConfig cfg = base_config(pair, 0.0, make_gauge_symbol(0.0), grid, 20.0, 21.0, 0.01);

    const ComplexGaussian phi = packet(1.0, -1.0, 0.8);
    const ComplexField got =
        evolve_span(cfg, phi.evaluate(grid), 20.0, 21.0, {20.0, 21.0}, nullptr);
    const ComplexField want = gauss::U(phi, 1.0).evaluate(grid);
    CHECK(l2_distance(got, want) / want.norm_l2() < 1e-12);
}

TEST_CASE("second-order error ratio against the exact linear flow") {
    auto pair = std::make_shared<const FundamentalPair>(
        integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 10.0));
    // Early span: the trap is still strong there, so the splitting error sits
    // far above the box-truncation floor.
    const SpectralGrid grid = SpectralGrid::make1d(1024, 64.0);
    const ComplexGaussian phi = packet(1.0, 0.0, 0.3);
    const ComplexField seed =
        gauss::propagate(phi, mdfm_chain(pair->value_at(2.0))).evaluate(grid);
    const ComplexField exact =
        gauss::propagate(phi, mdfm_chain(pair->value_at(4.0))).evaluate(grid);

    auto err_at = [&](double dt) {
        SolverConfig cfg =
            base_config(pair, 0.1, make_gauge_symbol(0.0), grid, 2.0, 4.0, dt);
        const ComplexField got = evolve_span(cfg, seed, 2.0, 4.0, {2.0, 4.0}, nullptr);
        return l2_distance(got, exact);
    };
    const double e1 = err_at(0.04);
    const double e2 = err_at(0.02);
    CHECK(e1 > 1e-12);  // measurable, not roundoff
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("a full step backward undoes a full step forward") {
    auto pair = std::make_shared<const FundamentalPair>(
        integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 10.0));
    const SpectralGrid grid = SpectralGrid::make1d(512, 64.0);
    SolverConfig cfg = base_config(pair, 0.1, make_gauge_symbol(0.0), grid, 5.0, 7.0, 0.02);

    const ComplexField seed =
        gauss::propagate(packet(1.0, 0.0, 0.3), mdfm_chain(pair->value_at(5.0)))
            .evaluate(grid);
    const ComplexField fwd = evolve_span(cfg, seed, 5.0, 7.0, {5.0, 7.0}, nullptr);
    const ComplexField back = evolve_span(cfg, fwd, 7.0, 5.0, {7.0, 5.0}, nullptr);
    CHECK(l2_distance(back, seed) / seed.norm_l2() < 1e-10);
}

TEST_CASE("gauge evolution conserves mass to near roundoff") {
    auto pair = std::make_shared<const FundamentalPair>(
        integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 40.0));
    const SpectralGrid grid = SpectralGrid::make1d(512, 64.0);
    SolverConfig cfg = base_config(pair, 0.1, make_gauge_symbol(1.0), grid, 10.0, 30.0, 0.02);

    const ComplexField seed = u_p_field(*cfg.pair, cfg.data, cfg.pp, 10.0, grid);
    const Trajectory traj = split_step_evolve(cfg, seed);
    const double m0 = traj.mass.front();
    for (double m : traj.mass) CHECK(std::abs(m - m0) < 1e-8 * m0);
}

TEST_CASE("paired legs pin the residual at their seed times") {
    auto pair = std::make_shared<const FundamentalPair>(
        integrate_fundamental(make_zero_potential(), 70.0));
    const SpectralGrid grid = SpectralGrid::make1d(1024, 128.0);
    SolverConfig cfg = base_config(pair, 0.0, make_gauge_symbol(0.0), grid, 20.0, 60.0, 0.02);
    cfg.b = 0.25;
    cfg.tau_samples = {25.0, 30.0, 40.0};

    const DecayReport rep = final_state_experiment(cfg);

    // Forward seeds u_p(t0), backward seeds u_p(t1); both residuals vanish
    // at their own seed time by construction.
    CHECK(rep.forward.traj.residual_l2.front() < 1e-12);
    CHECK(rep.backward.traj.residual_l2.back() < 1e-12);

    // Linear flow against the free profile decays like 1/t at lambda = 0.
    CHECK(rep.backward.slope < -0.5);
    CHECK(rep.backward.r2 > 0.9);
    CHECK(rep.pass);
    CHECK(rep.threshold == doctest::Approx(-0.25).epsilon(1e-12));

    CHECK(rep.backward.mass_drift < 1e-8);
    CHECK(rep.forward.mass_drift < 1e-8);
    CHECK(rep.pair_admissible);
    CHECK(rep.weighted_norms.size() == 3);
    for (double w : rep.weighted_norms) {
        CHECK(std::isfinite(w));
        CHECK(w > 0.0);
    }
}

TEST_CASE("zero datum rides the zero solution") {
    auto pair = std::make_shared<const FundamentalPair>(
        integrate_fundamental(make_zero_potential(), 30.0));
    const SpectralGrid grid = SpectralGrid::make1d(128, 32.0);
    SolverConfig cfg = base_config(pair, 0.0, make_gauge_symbol(1.0), grid, 20.0, 24.0, 0.05);
    cfg.data = narrow_data(0.0);
    cfg.record_times = log_spaced_times(20.0, 24.0, 5);
    cfg.tau_samples = {21.0, 22.0};

    const DecayReport rep = final_state_experiment(cfg);
    for (double r : rep.forward.traj.residual_l2) CHECK(r < 1e-13);
    for (double r : rep.backward.traj.residual_l2) CHECK(r < 1e-13);
    CHECK(std::isnan(rep.slope));  // nothing above the fit's noise floor
}

TEST_CASE("non-finite states abort with the last good time") {
    auto pair = std::make_shared<const FundamentalPair>(
        integrate_fundamental(make_zero_potential(), 30.0));
    const SpectralGrid grid = SpectralGrid::make1d(64, 16.0);
    SolverConfig cfg = base_config(pair, 0.0, make_gauge_symbol(5.0), grid, 20.0, 21.0, 0.05);

    ComplexGaussian huge = packet(1.0, 0.0, 0.0);
    huge.amplitude = cplx(1e80, 0.0);
    CHECK_THROWS_AS((void)split_step_evolve(cfg, huge.evaluate(grid)), convergence_error);
}

TEST_CASE("ablation changes nothing when the resonant coefficient vanishes") {
    auto pair = std::make_shared<const FundamentalPair>(
        integrate_fundamental(make_zero_potential(), 50.0));
    const SpectralGrid grid = SpectralGrid::make1d(512, 64.0);
    SolverConfig cfg =
        base_config(pair, 0.0, make_short_range_symbol(2.0), grid, 20.0, 40.0, 0.04);
    cfg.tau_samples = {25.0, 30.0};
    CHECK(std::abs(cfg.table.coeff(1)) < 1e-8);

    const DecayReport main = final_state_experiment(cfg);
    const DecayReport abl = ablation_no_log(cfg);
    REQUIRE(main.backward.traj.residual_l2.size() ==
            abl.backward.traj.residual_l2.size());
    for (size_t i = 0; i < main.backward.traj.residual_l2.size(); ++i) {
        const double a = main.backward.traj.residual_l2[i];
        const double b = abl.backward.traj.residual_l2[i];
        CHECK(std::abs(a - b) <= 1e-12 * (1.0 + a));
    }
}

TEST_CASE("config validation catches the usual mistakes") {
    auto pair = std::make_shared<const FundamentalPair>(
        integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 30.0));
    const SpectralGrid grid = SpectralGrid::make1d(256, 32.0);
    const SolverConfig good =
        base_config(pair, 0.1, make_gauge_symbol(0.0), grid, 10.0, 20.0, 0.02);

    SolverConfig bad = good;
    bad.dt = 0.06;
    CHECK_THROWS_AS(validate_solver_config(bad), domain_error);

    bad = good;
    bad.t0 = 0.5;  // below the matching radius
    CHECK_THROWS_AS(validate_solver_config(bad), domain_error);

    bad = good;
    bad.t1 = 40.0;  // beyond the tabulated pair
    CHECK_THROWS_AS(validate_solver_config(bad), domain_error);

    bad = good;
    bad.record_times = {12.0, 11.0};
    CHECK_THROWS_AS(validate_solver_config(bad), domain_error);

    bad = good;
    bad.grid = SpectralGrid::make1d(8, 100.0);  // profile chirp unresolvable
    CHECK_THROWS_AS(validate_solver_config(bad), resolution_error);
}

TEST_CASE("log-spaced times hit both endpoints in order") {
    const std::vector<double> ts = log_spaced_times(10.0, 1000.0, 5);
    REQUIRE(ts.size() == 5);
    CHECK(ts.front() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(ts.back() == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(ts[2] == doctest::Approx(100.0).epsilon(1e-12));
    for (size_t i = 1; i < ts.size(); ++i) CHECK(ts[i] > ts[i - 1]);
    CHECK_THROWS_AS((void)log_spaced_times(10.0, 1000.0, 1), domain_error);
    CHECK_THROWS_AS((void)log_spaced_times(-1.0, 10.0, 4), domain_error);
}
