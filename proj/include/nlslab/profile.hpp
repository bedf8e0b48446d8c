#pragma once

#include <array>
#include <string>

#include "nlslab/fieldops.hpp"
#include "nlslab/gaussian.hpp"
#include "nlslab/grid.hpp"
#include "nlslab/potential.hpp"

namespace nlslab {

// Final datum, stored frequency-side: the fields hold uhat_plus itself.
// Either an analytic Gaussian or grid samples at the xi-nodes (wrapped
// order, the fft_forward output convention).
struct FinalData {
    bool analytic = true;
    ComplexGaussian gaussian;  // uhat_plus(xi), used when analytic
    ComplexField sampled;      // uhat_plus at xi-nodes, used otherwise
    double amplitude_sup = 0.0;
    double eps0 = 0.5;  // smallness threshold the experiment enforces

    bool small_enough() const { return amplitude_sup < eps0; }
};

FinalData make_gaussian_final_data(const ComplexGaussian& uhat_plus, double eps0 = 0.5);
FinalData make_sampled_final_data(const ComplexField& uhat_plus, double eps0 = 0.5);
// Default datum: Gaussian of unit width centered at xi0 = 0.25 on each axis
// (kept off the origin, where the |xi|^(-delta) weight concentrates), peak
// amplitude 0.5 * eps0.
FinalData default_final_data(int dim, double eps0 = 0.5);

// Constants entering the corrected profile phase.
struct ProfileParams {
    double g1 = 0.0;
    double c_plus = 1.0;  // > 0
    double p_c = 2.0;     // > 0
};

ProfileParams make_profile_params(double g1, double c_plus, double p_c);

// uhat_plus at an arbitrary frequency point: closed form for analytic data,
// trigonometric interpolation of the stored samples otherwise.
cplx uhat_value(const FinalData& data, const std::array<double, 2>& xi);

// what(t, xi) = uhat_plus(xi) exp(-i (g1/c_plus) |uhat_plus(xi)|^{p_c} log t).
cplx w_hat_value(const FinalData& data, const ProfileParams& pp, double t,
                 const std::array<double, 2>& xi);

// what(t) sampled at the grid's xi-nodes (wrapped order). t >= 1.
ComplexField w_hat(const FinalData& data, const ProfileParams& pp, double t,
                   const SpectralGrid& grid);

// Asymptotic profile on the spatial grid,
//   u_p(t, x) = (i zeta2)^(-d/2) exp(i|x|^2 zeta2'/(2 zeta2)) what(t, x/zeta2),
// evaluated pointwise in closed form. Requires t > r0 and the chirp sampling
// criterion for zeta2'/(2 zeta2) on the grid.
ComplexField u_p_field(const FundamentalPair& pair, const FinalData& data,
                       const ProfileParams& pp, double t, const SpectralGrid& grid);

// R(t) = M1(t) D(zeta2) (F M2(t) F^{-1} - 1) applied to a frequency-side
// field; the output is spatial. Uses one inverse transform, the (M2 - 1)
// multiplier, and one direct quadrature at x/zeta2.
ComplexField remainder_R_apply(const FundamentalPair& pair, double t, const ComplexField& f);

// ||R(t) f||_2 through the isometry shortcut ||(M2(t) - 1) F^{-1} f||_2;
// avoids the dilation stage entirely.
double remainder_R_norm(const FundamentalPair& pair, double t, const ComplexField& f);

// Weighted-space membership of u_plus, certified analytically for Gaussian
// data only. status: "finite", "divergent" (the homogeneous negative-order
// norm blows up at xi = 0), or "unchecked" (sampled data).
struct MembershipReport {
    std::string status = "unchecked";
    double h0_weighted = 0.0;         // || <x>^{delta'} u_plus ||_2
    double hdot_negative = 0.0;       // homogeneous negative-order seminorm, inf if divergent
};
MembershipReport certify_membership(const FinalData& data, double delta, double delta_prime);

// Snapshot export, rows x,re,im,abs (x0,x1,re,im,abs in 2-D).
void write_field_csv(const ComplexField& f, const std::string& path);

}  // namespace nlslab
