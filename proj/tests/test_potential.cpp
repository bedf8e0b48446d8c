#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "nlslab/potential.hpp"

using namespace nlslab;

namespace {

std::string first_line(const std::string& path) {
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    return line;
}

}  // namespace

TEST_CASE("zero coefficient: the pair is (1, t) exactly") {
    auto pair = integrate_fundamental(make_zero_potential(), 1.0e5);
    for (double t : {0.0, 1.0, 37.5, 9.9e4}) {
        const ZetaSample s = pair.value_at(t);
        CHECK(s.z1 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(s.z1p) < 1e-12);
        CHECK(s.z2 == doctest::Approx(t).epsilon(1e-12));
        CHECK(s.z2p == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(pair.wronskian_defect_max() < 1e-9);
}

TEST_CASE("wronskian defect stays below 1e-9 out to t = 1e5") {
    auto zero = integrate_fundamental(make_zero_potential(), 1.0e5);
    CHECK(zero.wronskian_defect_max() < 1e-9);

    auto inv = integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 1.0e5);
    CHECK(inv.wronskian_defect_max() < 1e-9);

    // Off-node queries re-integrate locally; the defect must not grow there.
    for (double t : {3.14159, 271.828, 31415.9}) {
        CHECK(std::abs(inv.value_at(t).wronskian_defect()) < 1e-9);
    }
}

TEST_CASE("recessive exponent recovery across the tail strengths") {
    // lambda = (1 - sqrt(1 - 4 sigma1)) / 2, evaluated once and frozen.
    struct Row {
        double sigma1, lambda;
    };
    const Row rows[] = {
        {0.04, 0.041742430504416},
        {0.09, 0.1},
        {0.16, 0.2},
    };
    for (const Row& row : rows) {
        CAPTURE(row.sigma1);
        auto spec = make_inverse_square_potential(row.sigma1, 1.0);
        CHECK(spec.expected_lambda() == doctest::Approx(row.lambda).epsilon(1e-12));
        auto pair = integrate_fundamental(spec, 1.0e5);
        const Asymptotics fit = fit_asymptotics(pair);
        CHECK(std::abs(fit.lambda_hat - row.lambda) <= 1e-3);
        CHECK(std::abs(fit.lambda2_hat - (1.0 - row.lambda)) <= 1e-3);
        CHECK(fit.rsq1 >= 0.999);
    }
}

TEST_CASE("branch constants satisfy c1 c2 (1 - 2 lambda) = 1") {
    auto pair = integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 1.0e5);
    const Asymptotics fit = fit_asymptotics(pair);
    CHECK(fit.c1 * fit.c2 * (1.0 - 2.0 * fit.lambda_hat) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(fit.c_plus == doctest::Approx(std::pow(std::abs(fit.c2), 1.0 / 0.9)).epsilon(1e-6));

    const A1Report rep = validate_A1(pair);
    CHECK(rep.ok_wronskian);
    CHECK(rep.ok_recessive);
    CHECK(rep.ok_dominant);
    CHECK(rep.ok_constants);
    CHECK(rep.passed);
    // t^3 sigma'(t) -> -2 sigma1 for the built-in tail. Informational probe,
    // recorded but never part of the gate.
    CHECK(rep.sigma0_hat == doctest::Approx(-0.18).epsilon(1e-3));
}

TEST_CASE("early-time extension freezes the coefficient below r0") {
    auto spec = make_inverse_square_potential(0.09, 2.0);
    CHECK(spec.sigma_below < 0.0);
    CHECK(spec.eval(0.0) == doctest::Approx(spec.sigma_below));
    CHECK(spec.eval(1.0) == doctest::Approx(spec.sigma_below));
    CHECK(spec.eval(4.0) == doctest::Approx(0.09 / 16.0).epsilon(1e-12));
    // s tanh(s) = lambda fixes the frozen value at -(s/r0)^2.
    const double s = std::sqrt(-spec.sigma_below) * spec.r0;
    CHECK(s * std::tanh(s) == doctest::Approx(spec.expected_lambda()).epsilon(1e-10));
}

TEST_CASE("generic early-time data joins the dominant branch instead") {
    // An over-deep well below r0 leaves a t^(1-lambda) component in zeta1,
    // so its late-time slope is the dominant exponent. The built-in matched
    // extension is what pins zeta1 onto the recessive branch.
    auto fn = [](double t) { return t < 1.0 ? -1.0 : 0.09 / (t * t); };
    auto pair = integrate_fundamental(make_custom_potential(fn, 0.1), 1.0e5);
    CHECK(pair.wronskian_defect_max() < 1e-9);
    const Asymptotics fit = fit_asymptotics(pair);
    CHECK(std::abs(fit.lambda_hat - 0.9) <= 0.01);
}

TEST_CASE("value_at reproduces recorded nodes and rejects bad queries") {
    auto pair = integrate_fundamental(make_inverse_square_potential(0.16, 1.0), 1.0e3);
    const ZetaSample& node = pair.samples()[pair.samples().size() / 2];
    const ZetaSample got = pair.value_at(node.t);
    CHECK(got.z1 == doctest::Approx(node.z1).epsilon(1e-12));
    CHECK(got.z2 == doctest::Approx(node.z2).epsilon(1e-12));

    CHECK_THROWS_AS((void)pair.value_at(-1.0), domain_error);
    CHECK_THROWS_AS((void)pair.value_at(2.0e3), domain_error);
}

TEST_CASE("constructor and factory guards") {
    CHECK_THROWS_AS((void)make_inverse_square_potential(0.25, 1.0), domain_error);
    CHECK_THROWS_AS((void)make_inverse_square_potential(-0.01, 1.0), domain_error);
    CHECK_THROWS_AS((void)make_inverse_square_potential(0.09, 0.0), domain_error);
    CHECK_THROWS_AS((void)integrate_fundamental(make_zero_potential(), -5.0), domain_error);
    CHECK_THROWS_AS((void)integrate_fundamental(make_zero_potential(), 10.0, 0.5), domain_error);
}

TEST_CASE("csv dump carries the contract header") {
    auto pair = integrate_fundamental(make_inverse_square_potential(0.09, 1.0), 100.0);
    const std::string path = "/tmp/nlslab_test_zeta.csv";
    pair.write_csv(path);
    CHECK(first_line(path) == "t,zeta1,zeta1p,zeta2,zeta2p,wronskian_defect");

    std::ifstream is(path);
    std::string line;
    size_t rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == pair.samples().size() + 1);
    std::remove(path.c_str());
}
