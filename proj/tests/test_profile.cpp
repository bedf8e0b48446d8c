#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "nlslab/profile.hpp"

using namespace nlslab;

namespace {

std::string first_line(const std::string& path) {
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    return line;
}

double rel_l2(const ComplexField& got, const ComplexField& want) {
    return l2_distance(got, want) / want.norm_l2();
}

}  // namespace

TEST_CASE("profile phase is off at t = 1 and stays off when g1 = 0") {
    const FinalData data = default_final_data(1);
    const ProfileParams live = make_profile_params(1.0, 1.2, 20.0 / 9.0);
    const ProfileParams off = make_profile_params(0.0, 1.2, 20.0 / 9.0);
    const SpectralGrid grid = SpectralGrid::make1d(256, 30.0);

    const ComplexField base = w_hat(data, live, 1.0, grid);
    CHECK(rel_l2(base, data.gaussian.evaluate_freq(grid)) < 1e-13);
    for (double t : {5.0, 500.0}) {
        CHECK(rel_l2(w_hat(data, off, t, grid), base) < 1e-13);
    }
}

TEST_CASE("log-phase correction never changes the modulus") {
    const FinalData data = default_final_data(1);
    const ProfileParams pp = make_profile_params(0.8, 1.5, 20.0 / 9.0);
    for (double t : {1.0, 7.0, 1.0e3}) {
        for (double xi : {-2.0, 0.0, 0.25, 1.7}) {
            const cplx w = w_hat_value(data, pp, t, {xi, 0.0});
            const cplx u = uhat_value(data, {xi, 0.0});
            CHECK(std::abs(std::abs(w) - std::abs(u)) < 1e-14);
        }
    }
}

TEST_CASE("accumulated phase is affine in log t") {
    const FinalData data = default_final_data(1);
    const ProfileParams pp = make_profile_params(0.9, 1.3, 20.0 / 9.0);
    for (double xi : {0.1, 0.25, 0.8}) {
        const cplx u = uhat_value(data, {xi, 0.0});
        const double rate = (pp.g1 / pp.c_plus) * std::pow(std::abs(u), pp.p_c);
        for (double t : {10.0, 100.0, 1.0e4}) {
            // Unwind the predicted phase; what should land back on uhat_plus.
            const cplx w = w_hat_value(data, pp, t, {xi, 0.0});
            const cplx unwound = w * std::polar(1.0, rate * std::log(t));
            CHECK(std::abs(unwound - u) < 1e-12);
        }
    }
}

TEST_CASE("profile norm equals the datum norm") {
    const FinalData data = default_final_data(1);
    const ProfileParams pp = make_profile_params(1.0, 1.0, 20.0 / 9.0);
    auto pair = integrate_fundamental(make_zero_potential(), 10.0);
    const SpectralGrid grid = SpectralGrid::make1d(1024, 80.0);
    const ComplexField up = u_p_field(pair, data, pp, 5.0, grid);
    CHECK(up.norm_l2() == doctest::Approx(data.gaussian.norm_l2()).epsilon(1e-10));
}

TEST_CASE("closed form agrees with the operator chain M D") {
    const FinalData data = default_final_data(1);
    const ProfileParams pp = make_profile_params(0.7, 1.4, 20.0 / 9.0);
    const double t = 5.0;
    auto pair = integrate_fundamental(make_zero_potential(), 10.0);
    const SpectralGrid grid = SpectralGrid::make1d(1024, 80.0);
    const ZetaSample s = pair.value_at(t);

    // Sample what as a spatial function, then push it through the grid
    // operators D(zeta2) and the output chirp.
    ComplexField w = ComplexField::zeros(grid);
    for (int j = 0; j < grid.n[0]; ++j)
        w.v[w.idx(j)] = w_hat_value(data, pp, t, {grid.x(0, j), 0.0});
    ComplexField chain = dilate(w, s.z2);
    apply_chirp(chain, s.z2p / (2.0 * s.z2));

    CHECK(rel_l2(u_p_field(pair, data, pp, t, grid), chain) < 1e-10);
}

TEST_CASE("free coefficients with g1 = 0 reduce to the classical profile") {
    const FinalData data = default_final_data(1);
    const ProfileParams pp = make_profile_params(0.0, 1.0, 20.0 / 9.0);
    auto pair = integrate_fundamental(make_zero_potential(), 10.0);
    const SpectralGrid grid = SpectralGrid::make1d(1024, 80.0);
    const double t = 4.0;
    const ComplexField up = u_p_field(pair, data, pp, t, grid);
    const ComplexGaussian oracle =
        gauss::propagate(data.gaussian, {gauss::op_D(t), gauss::op_M(t)});
    CHECK(rel_l2(up, oracle.evaluate(grid)) < 1e-10);
}

TEST_CASE("remainder norm is bounded by twice the datum norm") {
    const FinalData data = default_final_data(1);
    auto pair = integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 2.0e3);
    const SpectralGrid grid = SpectralGrid::make1d(512, 40.0);
    const ComplexField f = data.gaussian.evaluate_freq(grid);
    const double fn = f.norm_l2();
    for (double t : {2.0, 10.0, 100.0, 1.0e3}) {
        CHECK(remainder_R_norm(pair, t, f) <= 2.0 * fn * (1.0 + 1e-12));
    }
}

TEST_CASE("remainder decays monotonically over the decades") {
    const FinalData data = default_final_data(1);
    auto pair = integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 2.0e4);
    const SpectralGrid grid = SpectralGrid::make1d(512, 40.0);
    const ComplexField f = data.gaussian.evaluate_freq(grid);
    const double n10 = remainder_R_norm(pair, 10.0, f);
    const double n100 = remainder_R_norm(pair, 100.0, f);
    const double n1000 = remainder_R_norm(pair, 1.0e3, f);
    const double n10000 = remainder_R_norm(pair, 1.0e4, f);
    CHECK(n100 < n10);
    CHECK(n1000 < n100);
    CHECK(n10000 < n1000);
    // zeta1/zeta2 ~ t^(2 lambda - 1) drives the multiplier phase, so the
    // norm should track t^(-0.8) at lambda = 0.1.
    const double slope = std::log(n10000 / n10) / std::log(1.0e4 / 10.0);
    CHECK(std::abs(slope - (-0.8)) < 0.1);
}

TEST_CASE("applied remainder matches the isometry shortcut") {
    const FinalData data = default_final_data(1);
    auto pair = integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 20.0);
    const SpectralGrid grid = SpectralGrid::make1d(2048, 160.0);
    const ComplexField f = data.gaussian.evaluate_freq(grid);
    const double t = 10.0;
    const ComplexField rf = remainder_R_apply(pair, t, f);
    const double direct = rf.norm_l2();
    const double shortcut = remainder_R_norm(pair, t, f);
    CHECK(std::abs(direct - shortcut) < 1e-6 * f.norm_l2());
}

TEST_CASE("weighted-space membership of the datum") {
    const FinalData data = default_final_data(1);
    // The datum does not vanish at the origin, so the homogeneous
    // negative-order norm diverges once delta >= 1/2.
    const MembershipReport far = certify_membership(data, 0.95, 1.0);
    CHECK(far.status == "divergent");
    CHECK(std::isinf(far.hdot_negative));
    CHECK(far.h0_weighted > 0.0);
    CHECK(std::isfinite(far.h0_weighted));

    const MembershipReport near = certify_membership(data, 0.3, 1.0);
    CHECK(near.status == "finite");
    CHECK(std::isfinite(near.hdot_negative));

    const SpectralGrid grid = SpectralGrid::make1d(128, 20.0);
    const FinalData sampled = make_sampled_final_data(data.gaussian.evaluate_freq(grid));
    CHECK(certify_membership(sampled, 0.95, 1.0).status == "unchecked");
}

TEST_CASE("datum size gate and parameter guards") {
    const FinalData data = default_final_data(1);
    CHECK(data.small_enough());
    CHECK(data.amplitude_sup == doctest::Approx(0.25).epsilon(1e-12));

    CHECK_THROWS_AS((void)make_profile_params(1.0, 0.0, 2.0), domain_error);
    CHECK_THROWS_AS((void)make_profile_params(1.0, 1.0, -2.0), domain_error);

    const ProfileParams pp = make_profile_params(1.0, 1.0, 2.0);
    const SpectralGrid grid = SpectralGrid::make1d(64, 10.0);
    CHECK_THROWS_AS((void)w_hat(data, pp, 0.5, grid), domain_error);
    auto pair = integrate_fundamental(make_zero_potential(), 10.0);
    CHECK_THROWS_AS((void)u_p_field(pair, data, pp, 0.5, grid), domain_error);
}

TEST_CASE("snapshot csv carries the contract header") {
    const SpectralGrid grid = SpectralGrid::make1d(64, 10.0);
    const ComplexField f = default_final_data(1).gaussian.evaluate(grid);
    const std::string path = "/tmp/nlslab_test_field.csv";
    write_field_csv(f, path);
    CHECK(first_line(path) == "x,re,im,abs");
    std::remove(path.c_str());
}
