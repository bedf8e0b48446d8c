#pragma once

#include <vector>

#include "nlslab/gaussian.hpp"
#include "nlslab/grid.hpp"

namespace nlslab {

// Unitary continuum-convention Fourier transform on grid samples:
//   forward:  u(x-nodes) -> uhat(xi-nodes, wrapped order),
//             uhat(xi) = (2*pi)^(-d/2) Int exp(-i*x.xi) u dx,
// realized as (dx/sqrt(2*pi))^d * (-1)^k-phased FFT so that Parseval holds
// exactly between dx-weighted and dxi-weighted norms.
void fft_forward(ComplexField& f);
void fft_inverse(ComplexField& f);
ComplexField unitary_fft(const ComplexField& f, int direction);  // -1 fwd, +1 inv

// Multiply by exp(i*alpha*|x|^2). The chirp is admitted only while its local
// wavenumber 2*|alpha|*max|x| stays below 80% of the grid Nyquist per axis.
void apply_chirp(ComplexField& f, double alpha);
double chirp_headroom(const SpectralGrid& g, double alpha);  // <=1 means admitted

// M(tau): multiply by exp(i|x|^2/(2 tau)); same admission rule as apply_chirp.
ComplexField chirp_mul(const ComplexField& f, double tau);

// exp(i*tau*Laplacian/2) as an exact Fourier multiplier exp(-i*tau*|xi|^2/2).
ComplexField free_propagate(const ComplexField& f, double tau);

// D(tau), tau > 0: (i*tau)^(-d/2) f(x/tau) on the same grid, via exact
// evaluation of the trigonometric interpolant. Fails with a resolution error
// when the dilated support (tau > 1) or spectrum (tau < 1) no longer fits.
ComplexField dilate(const ComplexField& f, double tau);

// Evaluate the trigonometric interpolant of equispaced samples (spacing L/n,
// first sample at -L/2) at arbitrary points. Nyquist mode symmetrized.
std::vector<cplx> trig_interpolate(const std::vector<cplx>& samples, double L,
                                   const std::vector<double>& queries);

// Direct quadrature transform (2*pi)^(-d/2) * vol * sum_j exp(sign*i*q.x_j) f_j
// at a tensor product of query frequencies; exact continuum quadrature of the
// unitary transform at off-grid frequencies.
ComplexField quad_transform_eval(const ComplexField& f, const std::vector<double>& q0,
                                 const std::vector<double>& q1, int sign);

// U0(t,0) = M(zeta2/zeta2') D(zeta2) F M(zeta2/zeta1) applied on the grid; the
// dilation stage is evaluated by direct quadrature at x/zeta2, so the result
// lives on the same grid as the input.
ComplexField mdfm_apply(const ComplexField& f, double z1, double z2, double z2p);
class FundamentalPair;  // potential.hpp
ComplexField mdfm_apply(const FundamentalPair& pair, double t, const ComplexField& f);

// Quadratic-phase commutation residuals. Both sides are built from grid
// operators; values are relative L2 differences.
struct LensResiduals {
    double corrected;  // phase b/(1+4ab)
    double displayed;  // phase 4ab/(1+4ab)
};
LensResiduals lens_identity_residual(double a, double b, const ComplexGaussian& g,
                                     const SpectralGrid& grid);

struct ABCCoefficients {
    double A;
    double B;
    double C;
};
// A_n = (n-1) zeta2 zeta2' / (2 C_n), B_n = zeta1 C_n / (2 zeta2),
// C_n = 1 + (n-1) zeta1 zeta2'.
ABCCoefficients abc_coefficients(int n, double z1, double z2, double z2p);

double factorization_residual(int n, double z1, double z2, double z2p,
                              const ComplexGaussian& g, const SpectralGrid& grid);

}  // namespace nlslab
