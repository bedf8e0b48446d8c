#include "nlslab/fieldops.hpp"

#include <cmath>
#include <sstream>

#include "nlslab/fft.hpp"
#include "nlslab/potential.hpp"

namespace nlslab {

namespace {

// Chunked phase recurrence: multiplying a running unit phase accumulates
// roundoff linearly, so re-anchor with std::polar every 256 steps.
class PhaseWalker {
  public:
    PhaseWalker(double theta0, double dtheta) : theta0_(theta0), dtheta_(dtheta) { resync(0); }
    cplx value() const { return cur_; }
    void advance() {
        ++k_;
        if (k_ % 256 == 0)
            resync(k_);
        else
            cur_ *= step_;
    }

  private:
    void resync(long k) {
        cur_ = std::polar(1.0, theta0_ + dtheta_ * static_cast<double>(k));
        step_ = std::polar(1.0, dtheta_);
        k_ = k;
    }
    double theta0_, dtheta_;
    cplx cur_, step_;
    long k_ = 0;
};

void checkerboard(ComplexField& f) {
    const SpectralGrid& g = f.grid;
    if (g.dim == 1) {
        for (int k = 1; k < g.n[0]; k += 2) f.v[static_cast<size_t>(k)] = -f.v[static_cast<size_t>(k)];
    } else {
        for (int k0 = 0; k0 < g.n[0]; ++k0)
            for (int k1 = 0; k1 < g.n[1]; ++k1)
                if ((k0 + k1) & 1) f.v[f.idx(k0, k1)] = -f.v[f.idx(k0, k1)];
    }
}

void fft_nd(ComplexField& f, int sign) {
    const SpectralGrid& g = f.grid;
    if (g.dim == 1) {
        fft::transform(f.v.data(), static_cast<size_t>(g.n[0]), sign);
    } else {
        const size_t n0 = static_cast<size_t>(g.n[0]), n1 = static_cast<size_t>(g.n[1]);
        for (size_t r = 0; r < n0; ++r) fft::transform(f.v.data() + r * n1, n1, sign);
        for (size_t c = 0; c < n1; ++c) fft::transform_strided(f.v.data() + c, n0, n1, sign);
    }
}

void scale_field(ComplexField& f, cplx s) {
    for (cplx& z : f.v) z *= s;
}

// Relative |f|^2 mass outside the per-axis window |x_ax| <= frac * (L_ax / 2).
double spatial_tail_fraction(const ComplexField& f, double frac) {
    const SpectralGrid& g = f.grid;
    double out = 0.0, tot = 0.0;
    if (g.dim == 1) {
        const double lim = frac * g.length[0] / 2.0;
        for (int j = 0; j < g.n[0]; ++j) {
            const double m = std::norm(f.v[static_cast<size_t>(j)]);
            tot += m;
            if (std::abs(g.x(0, j)) > lim) out += m;
        }
    } else {
        const double lim0 = frac * g.length[0] / 2.0, lim1 = frac * g.length[1] / 2.0;
        for (int j0 = 0; j0 < g.n[0]; ++j0)
            for (int j1 = 0; j1 < g.n[1]; ++j1) {
                const double m = std::norm(f.v[f.idx(j0, j1)]);
                tot += m;
                if (std::abs(g.x(0, j0)) > lim0 || std::abs(g.x(1, j1)) > lim1) out += m;
            }
    }
    return tot > 0.0 ? out / tot : 0.0;
}

double spectral_tail_fraction(const ComplexField& f, double frac) {
    ComplexField h = unitary_fft(f, -1);
    const SpectralGrid& g = h.grid;
    double out = 0.0, tot = 0.0;
    if (g.dim == 1) {
        const double lim = frac * g.nyquist(0);
        for (int k = 0; k < g.n[0]; ++k) {
            const double m = std::norm(h.v[static_cast<size_t>(k)]);
            tot += m;
            if (std::abs(g.xi(0, k)) > lim) out += m;
        }
    } else {
        const double lim0 = frac * g.nyquist(0), lim1 = frac * g.nyquist(1);
        for (int k0 = 0; k0 < g.n[0]; ++k0)
            for (int k1 = 0; k1 < g.n[1]; ++k1) {
                const double m = std::norm(h.v[h.idx(k0, k1)]);
                tot += m;
                if (std::abs(g.xi(0, k0)) > lim0 || std::abs(g.xi(1, k1)) > lim1) out += m;
            }
    }
    return tot > 0.0 ? out / tot : 0.0;
}

constexpr double kTailTol = 1e-9;

}  // namespace

void fft_forward(ComplexField& f) {
    const SpectralGrid& g = f.grid;
    fft_nd(f, -1);
    checkerboard(f);
    double s = 1.0;
    for (int ax = 0; ax < g.dim; ++ax) s *= g.dx(ax) / std::sqrt(2.0 * PI);
    scale_field(f, s);
}

void fft_inverse(ComplexField& f) {
    const SpectralGrid& g = f.grid;
    checkerboard(f);
    fft_nd(f, +1);
    double s = 1.0;
    for (int ax = 0; ax < g.dim; ++ax) s *= (2.0 * PI / g.length[ax]) / std::sqrt(2.0 * PI);
    scale_field(f, s);
}

ComplexField unitary_fft(const ComplexField& f, int direction) {
    ComplexField out = f;
    if (direction == -1)
        fft_forward(out);
    else if (direction == +1)
        fft_inverse(out);
    else
        throw domain_error("unitary_fft: direction must be -1 (forward) or +1 (inverse)");
    return out;
}

double chirp_headroom(const SpectralGrid& g, double alpha) {
    double worst = 0.0;
    for (int ax = 0; ax < g.dim; ++ax) {
        const double local_k = 2.0 * std::abs(alpha) * (g.length[ax] / 2.0);
        worst = std::max(worst, local_k / (0.8 * g.nyquist(ax)));
    }
    return worst;
}

void apply_chirp(ComplexField& f, double alpha) {
    const SpectralGrid& g = f.grid;
    const double head = chirp_headroom(g, alpha);
    if (head > 1.0) {
        std::ostringstream os;
        os << "apply_chirp: quadratic phase alpha=" << alpha
           << " oscillates at " << head << "x the admitted grid bandwidth; refine n or shrink the box";
        throw resolution_error(os.str());
    }
    if (g.dim == 1) {
        for (int j = 0; j < g.n[0]; ++j) {
            const double x = g.x(0, j);
            f.v[static_cast<size_t>(j)] *= std::polar(1.0, alpha * x * x);
        }
    } else {
        for (int j0 = 0; j0 < g.n[0]; ++j0) {
            const double x0 = g.x(0, j0);
            for (int j1 = 0; j1 < g.n[1]; ++j1) {
                const double x1 = g.x(1, j1);
                f.v[f.idx(j0, j1)] *= std::polar(1.0, alpha * (x0 * x0 + x1 * x1));
            }
        }
    }
}

ComplexField chirp_mul(const ComplexField& f, double tau) {
    if (tau == 0.0) throw domain_error("chirp_mul: tau must be nonzero");
    ComplexField out = f;
    apply_chirp(out, 1.0 / (2.0 * tau));
    return out;
}

ComplexField free_propagate(const ComplexField& f, double tau) {
    ComplexField h = unitary_fft(f, -1);
    const SpectralGrid& g = h.grid;
    if (g.dim == 1) {
        for (int k = 0; k < g.n[0]; ++k) {
            const double xi = g.xi(0, k);
            h.v[static_cast<size_t>(k)] *= std::polar(1.0, -0.5 * tau * xi * xi);
        }
    } else {
        for (int k0 = 0; k0 < g.n[0]; ++k0) {
            const double xi0 = g.xi(0, k0);
            for (int k1 = 0; k1 < g.n[1]; ++k1) {
                const double xi1 = g.xi(1, k1);
                h.v[h.idx(k0, k1)] *= std::polar(1.0, -0.5 * tau * (xi0 * xi0 + xi1 * xi1));
            }
        }
    }
    fft_inverse(h);
    return h;
}

std::vector<cplx> trig_interpolate(const std::vector<cplx>& samples, double L,
                                   const std::vector<double>& queries) {
    const size_t n = samples.size();
    if (!fft::is_pow2(n) || n < 2) throw domain_error("trig_interpolate: sample count must be a power of two");
    std::vector<cplx> H = samples;
    fft::transform(H.data(), n, -1);
    const size_t half = n / 2;
    std::vector<cplx> out(queries.size());
    for (size_t q = 0; q < queries.size(); ++q) {
        const double theta = 2.0 * PI * (queries[q] + L / 2.0) / L;
        cplx acc = H[0];
        {
            PhaseWalker up(theta, theta);
            for (size_t m = 1; m < half; ++m) {
                acc += H[m] * up.value();
                up.advance();
            }
        }
        {
            PhaseWalker dn(-theta, -theta);
            for (size_t m = 1; m < half; ++m) {
                acc += H[n - m] * dn.value();
                dn.advance();
            }
        }
        acc += H[half] * std::cos(static_cast<double>(half) * theta);
        out[q] = acc / static_cast<double>(n);
    }
    return out;
}

ComplexField dilate(const ComplexField& f, double tau) {
    if (!(tau > 0.0)) throw domain_error("dilate: tau must be positive");
    const SpectralGrid& g = f.grid;
    const double at = tau;
    if (at > 1.0 && spatial_tail_fraction(f, 1.0 / at) > kTailTol) {
        std::ostringstream os;
        os << "dilate: tau=" << tau << " pushes the support outside the box; enlarge the domain";
        throw resolution_error(os.str());
    }
    if (at < 1.0 && spectral_tail_fraction(f, 0.8 * at) > kTailTol) {
        std::ostringstream os;
        os << "dilate: tau=" << tau << " expands the spectrum past the grid Nyquist; refine n";
        throw resolution_error(os.str());
    }
    ComplexField out = ComplexField::zeros(g);
    if (g.dim == 1) {
        std::vector<double> q(static_cast<size_t>(g.n[0]));
        for (int j = 0; j < g.n[0]; ++j) q[static_cast<size_t>(j)] = g.x(0, j) / tau;
        out.v = trig_interpolate(f.v, g.length[0], q);
    } else {
        const size_t n0 = static_cast<size_t>(g.n[0]), n1 = static_cast<size_t>(g.n[1]);
        std::vector<double> q0(n0), q1(n1);
        for (size_t j = 0; j < n0; ++j) q0[j] = g.x(0, static_cast<int>(j)) / tau;
        for (size_t j = 0; j < n1; ++j) q1[j] = g.x(1, static_cast<int>(j)) / tau;
        // axis 0 pass: resample each column
        ComplexField mid = ComplexField::zeros(g);
        std::vector<cplx> col(n0);
        for (size_t c = 0; c < n1; ++c) {
            for (size_t r = 0; r < n0; ++r) col[r] = f.v[r * n1 + c];
            std::vector<cplx> rc = trig_interpolate(col, g.length[0], q0);
            for (size_t r = 0; r < n0; ++r) mid.v[r * n1 + c] = rc[r];
        }
        // axis 1 pass: rows are contiguous
        std::vector<cplx> row(n1);
        for (size_t r = 0; r < n0; ++r) {
            for (size_t c = 0; c < n1; ++c) row[c] = mid.v[r * n1 + c];
            std::vector<cplx> rr = trig_interpolate(row, g.length[1], q1);
            for (size_t c = 0; c < n1; ++c) out.v[r * n1 + c] = rr[c];
        }
    }
    const cplx pref = std::pow(cplx(0.0, 1.0) * tau, -0.5 * g.dim);
    scale_field(out, pref);
    return out;
}

namespace {

// One separable pass of the direct quadrature transform along `axis`:
// out(q, .) = sum_j exp(sign*i*q*x_j) in(j, .), x_j the axis nodes.
void quad_pass(const ComplexField& in, ComplexField& out, int axis,
               const std::vector<double>& q, int sign) {
    const SpectralGrid& g = in.grid;
    const int n = g.n[axis];
    const double x0 = -g.length[axis] / 2.0, dx = g.dx(axis);
    if (g.dim == 1) {
        for (size_t i = 0; i < q.size(); ++i) {
            const double w = sign * q[i];
            PhaseWalker ph(w * x0, w * dx);
            cplx acc = 0.0;
            for (int j = 0; j < n; ++j) {
                acc += in.v[static_cast<size_t>(j)] * ph.value();
                ph.advance();
            }
            out.v[i] = acc;
        }
        return;
    }
    const size_t n0 = static_cast<size_t>(g.n[0]), n1 = static_cast<size_t>(g.n[1]);
    if (axis == 0) {
        for (size_t i = 0; i < q.size(); ++i) {
            const double w = sign * q[i];
            PhaseWalker ph(w * x0, w * dx);
            for (size_t c = 0; c < n1; ++c) out.v[i * n1 + c] = 0.0;
            for (size_t j = 0; j < n0; ++j) {
                const cplx e = ph.value();
                for (size_t c = 0; c < n1; ++c) out.v[i * n1 + c] += e * in.v[j * n1 + c];
                ph.advance();
            }
        }
    } else {
        for (size_t r = 0; r < n0; ++r)
            for (size_t i = 0; i < q.size(); ++i) {
                const double w = sign * q[i];
                PhaseWalker ph(w * x0, w * dx);
                cplx acc = 0.0;
                for (size_t j = 0; j < n1; ++j) {
                    acc += in.v[r * n1 + j] * ph.value();
                    ph.advance();
                }
                out.v[r * q.size() + i] = acc;
            }
    }
}

}  // namespace

ComplexField quad_transform_eval(const ComplexField& f, const std::vector<double>& q0,
                                 const std::vector<double>& q1, int sign) {
    const SpectralGrid& g = f.grid;
    if (sign != -1 && sign != +1) throw domain_error("quad_transform_eval: sign must be -1 or +1");
    if (static_cast<int>(q0.size()) != g.n[0])
        throw domain_error("quad_transform_eval: axis-0 query count must match the grid");
    if (g.dim == 2 && static_cast<int>(q1.size()) != g.n[1])
        throw domain_error("quad_transform_eval: axis-1 query count must match the grid");
    ComplexField out = ComplexField::zeros(g);
    if (g.dim == 1) {
        quad_pass(f, out, 0, q0, sign);
    } else {
        ComplexField mid = ComplexField::zeros(g);
        quad_pass(f, mid, 0, q0, sign);
        quad_pass(mid, out, 1, q1, sign);
    }
    double s = 1.0;
    for (int ax = 0; ax < g.dim; ++ax) s *= g.dx(ax) / std::sqrt(2.0 * PI);
    scale_field(out, s);
    return out;
}

ComplexField mdfm_apply(const FundamentalPair& pair, double t, const ComplexField& f) {
    if (!(t > pair.potential().r0))
        throw domain_error("mdfm_apply: t must exceed the matching radius r0");
    const ZetaSample z = pair.value_at(t);
    if (z.z1 == 0.0 || z.z2p == 0.0)
        throw domain_error("mdfm_apply: vanishing zeta factor at the requested time");
    return mdfm_apply(f, z.z1, z.z2, z.z2p);
}

ComplexField mdfm_apply(const ComplexField& f, double z1, double z2, double z2p) {
    const SpectralGrid& g = f.grid;
    if (z2 == 0.0) throw domain_error("mdfm_apply: zeta2 must be nonzero");
    for (int ax = 0; ax < g.dim; ++ax) {
        const double qmax = (g.length[ax] / 2.0) / std::abs(z2);
        if (qmax > 0.8 * g.nyquist(ax)) {
            std::ostringstream os;
            os << "mdfm_apply: zeta2=" << z2 << " drives the quadrature frequency to " << qmax
               << " past the admitted bandwidth " << 0.8 * g.nyquist(ax) << "; refine n";
            throw resolution_error(os.str());
        }
    }
    ComplexField h = f;
    apply_chirp(h, z1 / (2.0 * z2));
    std::vector<double> q0(static_cast<size_t>(g.n[0])), q1;
    for (int j = 0; j < g.n[0]; ++j) q0[static_cast<size_t>(j)] = g.x(0, j) / z2;
    if (g.dim == 2) {
        q1.resize(static_cast<size_t>(g.n[1]));
        for (int j = 0; j < g.n[1]; ++j) q1[static_cast<size_t>(j)] = g.x(1, j) / z2;
    }
    ComplexField out = quad_transform_eval(h, q0, q1, -1);
    scale_field(out, std::pow(cplx(0.0, 1.0) * z2, -0.5 * g.dim));
    apply_chirp(out, z2p / (2.0 * z2));
    return out;
}

LensResiduals lens_identity_residual(double a, double b, const ComplexGaussian& g,
                                     const SpectralGrid& grid) {
    const double C = 1.0 + 4.0 * a * b;
    if (std::abs(C) < 1e-12)
        throw domain_error("lens_identity_residual: 4ab = -1 is excluded");
    if (!(C > 0.0))
        throw domain_error("lens_identity_residual: 1+4ab must be positive on the grid path");
    ComplexField f = g.evaluate(grid);
    const double fn = f.norm_l2();
    if (fn == 0.0) throw domain_error("lens_identity_residual: zero input field");

    ComplexField lhs = f;
    apply_chirp(lhs, b);
    lhs = free_propagate(lhs, 2.0 * a);

    ComplexField base = dilate(f, C);
    base = free_propagate(base, 2.0 * a * C);
    const cplx pref = std::pow(cplx(0.0, 1.0), 0.5 * grid.dim);
    scale_field(base, pref);

    ComplexField rhs_c = base;
    apply_chirp(rhs_c, b / C);
    ComplexField rhs_d = base;
    apply_chirp(rhs_d, 4.0 * a * b / C);

    LensResiduals r;
    r.corrected = l2_distance(lhs, rhs_c) / fn;
    r.displayed = l2_distance(lhs, rhs_d) / fn;
    return r;
}

ABCCoefficients abc_coefficients(int n, double z1, double z2, double z2p) {
    if (z2 == 0.0) throw domain_error("abc_coefficients: zeta2 must be nonzero");
    const double C = 1.0 + (n - 1) * z1 * z2p;
    if (std::abs(C) < 1e-12) throw domain_error("abc_coefficients: degenerate C_n");
    ABCCoefficients r;
    r.C = C;
    r.A = (n - 1) * z2 * z2p / (2.0 * C);
    r.B = z1 * C / (2.0 * z2);
    return r;
}

double factorization_residual(int n, double z1, double z2, double z2p,
                              const ComplexGaussian& g, const SpectralGrid& grid) {
    const ABCCoefficients co = abc_coefficients(n, z1, z2, z2p);
    if (!(co.C > 0.0))
        throw domain_error("factorization_residual: C_n must be positive on the grid path");
    ComplexField f = g.evaluate(grid);
    const double fn = f.norm_l2();
    if (fn == 0.0) throw domain_error("factorization_residual: zero input field");

    ComplexField lhs = f;
    apply_chirp(lhs, (n - 1) * z2 * z2p / 2.0);
    lhs = free_propagate(lhs, z1 / z2);

    ComplexField rhs = dilate(f, co.C);
    rhs = free_propagate(rhs, 2.0 * co.B);
    apply_chirp(rhs, co.A);
    scale_field(rhs, std::pow(cplx(0.0, 1.0), 0.5 * grid.dim));

    return l2_distance(lhs, rhs) / fn;
}

}  // namespace nlslab
