#include "nlslab/gaussian.hpp"

#include <cmath>

namespace nlslab {

namespace {

// Raw exponent form exp(-a*|x|^2/2 + b.x + c); all composition happens here.
struct Raw {
    int dim;
    cplx a;
    std::array<cplx, 2> b;
    cplx c;
};

Raw to_raw(const ComplexGaussian& g) {
    Raw r;
    r.dim = g.dim;
    r.a = g.width;
    r.c = std::log(g.amplitude);
    for (int ax = 0; ax < g.dim; ++ax) {
        r.b[ax] = g.width * g.center[ax] + cplx(0.0, 1.0) * g.momentum[ax];
        r.c += -0.5 * g.width * g.center[ax] * g.center[ax] -
               cplx(0.0, 1.0) * g.momentum[ax] * g.center[ax];
    }
    return r;
}

ComplexGaussian from_raw(const Raw& r) {
    if (!(r.a.real() > 0.0))
        throw domain_error("gaussian oracle breakdown: Re(width) <= 0 mid-sequence");
    ComplexGaussian g;
    g.dim = r.dim;
    g.width = r.a;
    cplx log_amp = r.c;
    for (int ax = 0; ax < r.dim; ++ax) {
        double x0 = r.b[ax].real() / r.a.real();
        double xi0 = (r.b[ax] - r.a * x0).imag();
        g.center[ax] = x0;
        g.momentum[ax] = xi0;
        log_amp += 0.5 * r.a * x0 * x0 + cplx(0.0, 1.0) * xi0 * x0;
    }
    g.amplitude = std::exp(log_amp);
    return g;
}

Raw raw_chirp(Raw r, double alpha) {
    r.a -= cplx(0.0, 2.0 * alpha);
    return r;
}

Raw raw_fourier(Raw r, int sign) {
    // sign=-1: forward transform kernel exp(-i x.xi); sign=+1: inverse.
    cplx a_old = r.a;
    for (int ax = 0; ax < r.dim; ++ax) {
        r.c += r.b[ax] * r.b[ax] / (2.0 * a_old) - 0.5 * std::log(a_old);
        r.b[ax] = cplx(0.0, sign) * r.b[ax] / a_old;
    }
    r.a = 1.0 / a_old;
    return r;
}

Raw raw_dilate(Raw r, double tau, int sign) {
    if (!(tau > 0.0)) throw domain_error("D(tau): tau must be positive");
    cplx log_itau = std::log(cplx(0.0, tau));
    if (sign > 0) {  // D(tau)
        r.a /= tau * tau;
        for (int ax = 0; ax < r.dim; ++ax) r.b[ax] /= tau;
        r.c -= 0.5 * r.dim * log_itau;
    } else {  // D(tau)^{-1}
        r.a *= tau * tau;
        for (int ax = 0; ax < r.dim; ++ax) r.b[ax] *= tau;
        r.c += 0.5 * r.dim * log_itau;
    }
    return r;
}

}  // namespace

cplx ComplexGaussian::value(const std::array<double, 2>& x) const {
    cplx e = std::log(amplitude);
    for (int ax = 0; ax < dim; ++ax) {
        double d = x[ax] - center[ax];
        e += -0.5 * width * d * d + cplx(0.0, 1.0) * momentum[ax] * d;
    }
    return std::exp(e);
}

cplx ComplexGaussian::value1d(double x) const { return value({x, 0.0}); }

double ComplexGaussian::norm_l2() const {
    Raw r = to_raw(*this);
    double p = r.a.real();
    double s = 2.0 * r.c.real();
    for (int ax = 0; ax < dim; ++ax) {
        double q = r.b[ax].real();
        s += q * q / p;
    }
    return std::sqrt(std::exp(s) * std::pow(PI / p, 0.5 * dim));
}

double ComplexGaussian::norm_sup() const {
    Raw r = to_raw(*this);
    double s = r.c.real();
    for (int ax = 0; ax < dim; ++ax) s += r.b[ax].real() * r.b[ax].real() / (2.0 * r.a.real());
    return std::exp(s);
}

ComplexField ComplexGaussian::evaluate(const SpectralGrid& g) const {
    if (g.dim != dim) throw domain_error("gaussian evaluate: dimension mismatch");
    ComplexField f = ComplexField::zeros(g);
    if (dim == 1) {
        for (int i = 0; i < g.n[0]; ++i) f.v[i] = value({g.x(0, i), 0.0});
    } else {
        for (int i = 0; i < g.n[0]; ++i)
            for (int j = 0; j < g.n[1]; ++j) f.v[f.idx(i, j)] = value({g.x(0, i), g.x(1, j)});
    }
    return f;
}

ComplexField ComplexGaussian::evaluate_freq(const SpectralGrid& g) const {
    if (g.dim != dim) throw domain_error("gaussian evaluate: dimension mismatch");
    ComplexField f = ComplexField::zeros(g);
    if (dim == 1) {
        for (int i = 0; i < g.n[0]; ++i) f.v[i] = value({g.xi(0, i), 0.0});
    } else {
        for (int i = 0; i < g.n[0]; ++i)
            for (int j = 0; j < g.n[1]; ++j) f.v[f.idx(i, j)] = value({g.xi(0, i), g.xi(1, j)});
    }
    return f;
}

namespace gauss {

ComplexGaussian chirp(const ComplexGaussian& g, double alpha) {
    return from_raw(raw_chirp(to_raw(g), alpha));
}

ComplexGaussian M(const ComplexGaussian& g, double tau) {
    if (tau == 0.0) throw domain_error("M(tau): tau must be nonzero");
    return chirp(g, 0.5 / tau);
}

ComplexGaussian M_inv(const ComplexGaussian& g, double tau) {
    if (tau == 0.0) throw domain_error("M(tau): tau must be nonzero");
    return chirp(g, -0.5 / tau);
}

ComplexGaussian D(const ComplexGaussian& g, double tau) {
    return from_raw(raw_dilate(to_raw(g), tau, +1));
}

ComplexGaussian D_inv(const ComplexGaussian& g, double tau) {
    return from_raw(raw_dilate(to_raw(g), tau, -1));
}

ComplexGaussian F(const ComplexGaussian& g) { return from_raw(raw_fourier(to_raw(g), -1)); }

ComplexGaussian F_inv(const ComplexGaussian& g) { return from_raw(raw_fourier(to_raw(g), +1)); }

ComplexGaussian U(const ComplexGaussian& g, double tau) {
    Raw r = to_raw(g);
    r = raw_fourier(r, -1);
    r = raw_chirp(r, -0.5 * tau);
    r = raw_fourier(r, +1);
    return from_raw(r);
}

cplx inner_product(const ComplexGaussian& f, const ComplexGaussian& g) {
    Raw rf = to_raw(f);
    Raw rg = to_raw(g);
    if (rf.dim != rg.dim) throw domain_error("inner_product: dimension mismatch");
    cplx a = std::conj(rf.a) + rg.a;
    cplx s = std::conj(rf.c) + rg.c;
    for (int ax = 0; ax < rf.dim; ++ax) {
        cplx b = std::conj(rf.b[ax]) + rg.b[ax];
        s += b * b / (2.0 * a);
    }
    return std::exp(s) * std::pow(2.0 * PI / a, 0.5 * rf.dim);
}

ComplexGaussian propagate(const ComplexGaussian& g, const std::vector<Op>& ops) {
    ComplexGaussian cur = g;
    for (const Op& op : ops) {
        switch (op.kind) {
            case Op::Kind::chirp: cur = chirp(cur, op.param); break;
            case Op::Kind::M: cur = M(cur, op.param); break;
            case Op::Kind::M_inv: cur = M_inv(cur, op.param); break;
            case Op::Kind::D: cur = D(cur, op.param); break;
            case Op::Kind::D_inv: cur = D_inv(cur, op.param); break;
            case Op::Kind::F: cur = F(cur); break;
            case Op::Kind::F_inv: cur = F_inv(cur); break;
            case Op::Kind::U: cur = U(cur, op.param); break;
        }
    }
    return cur;
}

}  // namespace gauss

}  // namespace nlslab
