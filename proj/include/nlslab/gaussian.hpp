#pragma once

#include <array>
#include <vector>

#include "nlslab/grid.hpp"

namespace nlslab {

// Closed-form complex Gaussian
//   g(x) = amplitude * exp(-width*|x - center|^2/2 + i*momentum.(x - center)),
// Re(width) > 0, isotropic width. The class algebra below is the exact
// parameter image of every unitary factor used in this project, which makes
// these objects the reference oracle for the grid operators.
struct ComplexGaussian {
    int dim = 1;
    cplx amplitude{1.0, 0.0};
    std::array<double, 2> center{0.0, 0.0};
    std::array<double, 2> momentum{0.0, 0.0};
    cplx width{1.0, 0.0};

    cplx value(const std::array<double, 2>& x) const;
    cplx value1d(double x) const;
    double norm_l2() const;
    double norm_sup() const;
    ComplexField evaluate(const SpectralGrid& g) const;
    // Evaluate at the grid's frequency nodes (wrapped order), for use as a
    // spectral-side sample set.
    ComplexField evaluate_freq(const SpectralGrid& g) const;
};

// Exact parameter maps. Each returns a new Gaussian; Re(width) > 0 is
// checked on the result (oracle breakdown otherwise).
namespace gauss {

// multiply by exp(i*alpha*|x|^2)
ComplexGaussian chirp(const ComplexGaussian& g, double alpha);
// M(tau): multiply by exp(i*|x|^2/(2*tau))
ComplexGaussian M(const ComplexGaussian& g, double tau);
ComplexGaussian M_inv(const ComplexGaussian& g, double tau);
// D(tau): (i*tau)^(-d/2) * g(x/tau), tau > 0
ComplexGaussian D(const ComplexGaussian& g, double tau);
ComplexGaussian D_inv(const ComplexGaussian& g, double tau);
// unitary Fourier transform, (2*pi)^(-d/2) Int exp(-i*x.xi) g dx
ComplexGaussian F(const ComplexGaussian& g);
ComplexGaussian F_inv(const ComplexGaussian& g);
// U(tau) = exp(i*tau*Laplacian/2): width map a -> a/(1 + i*a*tau)
ComplexGaussian U(const ComplexGaussian& g, double tau);

cplx inner_product(const ComplexGaussian& f, const ComplexGaussian& g);

struct Op {
    enum class Kind { chirp, M, M_inv, D, D_inv, F, F_inv, U } kind;
    double param = 0.0;  // alpha for chirp, tau otherwise, unused for F
};

ComplexGaussian propagate(const ComplexGaussian& g, const std::vector<Op>& ops);

inline Op op_chirp(double a) { return {Op::Kind::chirp, a}; }
inline Op op_M(double t) { return {Op::Kind::M, t}; }
inline Op op_M_inv(double t) { return {Op::Kind::M_inv, t}; }
inline Op op_D(double t) { return {Op::Kind::D, t}; }
inline Op op_D_inv(double t) { return {Op::Kind::D_inv, t}; }
inline Op op_F() { return {Op::Kind::F, 0.0}; }
inline Op op_F_inv() { return {Op::Kind::F_inv, 0.0}; }
inline Op op_U(double t) { return {Op::Kind::U, t}; }

}  // namespace gauss

}  // namespace nlslab
