#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlslab/common.hpp"

namespace nlslab {

// Critical homogeneity order p_c = 2/(d(1-lambda)).
double critical_exponent(int d, double lambda);

struct NonlinearityParams {
    int d = 1;
    double lambda = 0.0;
    double p_c = 2.0;
    double eta = 0.1;
};
NonlinearityParams make_nl_params(int d, double lambda, double eta);

// 2pi-periodic symbol g(theta) = F(e^{i theta}) restricting a homogeneous
// nonlinearity to the unit circle.
struct PeriodicSymbol {
    enum class Kind { gauge, re_power, short_range, custom };
    Kind kind = Kind::gauge;
    double mu = 1.0;   // gauge strength
    double p_c = 2.0;  // power used by the built-in symbols
    std::string label;
    std::function<cplx(double)> fn;  // custom evaluator
    cplx eval(double theta) const;
};

PeriodicSymbol make_gauge_symbol(double mu);
PeriodicSymbol make_re_power_symbol(double p_c);    // |cos|^p_c cos
PeriodicSymbol make_short_range_symbol(double p_c); // |cos|^p_c cos - i |sin|^p_c sin
PeriodicSymbol make_custom_symbol(std::function<cplx(double)> fn, std::string label);

// F(z) = |z|^{1+p_c} g(arg z), F(0) = 0. Built-in symbols take closed-form
// paths (mu|z|^{p_c} z, |Re z|^{p_c} Re z, ...) that agree with the generic
// polar evaluation identically.
cplx evaluate_F(const PeriodicSymbol& g, const NonlinearityParams& params, cplx z);

struct CoefficientTable {
    int nmax = 0;
    size_t quadrature_points = 0;   // points of the accepted quadrature level
    double tol = 0.0;
    double achieved = 0.0;          // max coefficient change on the last doubling
    std::vector<cplx> c;            // g_n at index n + nmax

    cplx coeff(int n) const;
};

// g_n = (1/2pi) int_0^{2pi} g(theta) e^{-i n theta} dtheta by the M-point
// uniform trapezoid rule (exact discrete Fourier transform of the samples),
// doubling M until two successive tables agree to tol. M = 0 picks the
// smallest admissible start (power of two, >= 4 nmax, >= 256).
CoefficientTable fourier_coefficients(const PeriodicSymbol& g, int nmax, size_t M = 0,
                                      double tol = 1e-10);

struct ResonantSplit {
    cplx resonant = 0.0;      // g_1 |u|^{p_c} u
    cplx nonresonant = 0.0;   // sum_{n != 0,1} g_n |u|^{1+p_c-n} u^n
    cplx zero_mode = 0.0;     // g_0 |u|^{1+p_c}
};
ResonantSplit resonant_split(const CoefficientTable& table, const NonlinearityParams& params,
                             cplx u);

// Least-squares slope of log|g_n| against log n over odd n >= 5 with
// |g_n| above noise. Returns NaN (degenerate-fit signal) below 8 points.
double decay_exponent_fit(const CoefficientTable& table);

struct A2Report {
    double a_d = 0.0;              // a_1 = (6l-l^2)/(4(1-2l)); a_d = 3dl/(4(1-2l))
    double weight_exponent = 0.0;  // 1 + a_d + eta
    double partial_sum = 0.0;      // sum over the table of |n|^{weight} |g_n|
    double decay_slope = 0.0;      // NaN when degenerate
    double tail_bound = 0.0;       // infinity when the fitted tail diverges
    double g0_abs = 0.0;
    double g1_imag_abs = 0.0;
    bool g0_zero = false;
    bool g1_real = false;
    bool sum_finite = false;
    bool passed = false;
};
A2Report check_A2(const CoefficientTable& table, const NonlinearityParams& params);

void write_coefficients_csv(const CoefficientTable& table, const std::string& path);

}  // namespace nlslab
