#include "nlslab/profile.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace nlslab {

namespace {

// (i*z)^(-d/2), z > 0, principal branch.
cplx dilation_prefactor(double z, int d) {
    return std::pow(cplx(0.0, z), -0.5 * static_cast<double>(d));
}

// Wrapped xi-order samples of one axis rearranged so the first entry sits at
// the left edge -pi*n/L of the frequency box, ascending; this is the layout
// trig_interpolate expects (box length n * dxi, Nyquist folded to the front
// by periodicity).
std::vector<cplx> unwrap_1d(const std::vector<cplx>& wrapped, const SpectralGrid& g, int axis) {
    const int n = g.n[axis];
    std::vector<cplx> nat(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int m = g.freq_index(axis, k);       // in (-n/2, n/2]
        const int p = (m + n / 2) % n;             // n/2 -> 0 by periodicity
        nat[static_cast<std::size_t>(p)] = wrapped[static_cast<std::size_t>(k)];
    }
    return nat;
}

double freq_box_length(const SpectralGrid& g, int axis) {
    return 2.0 * PI * g.n[axis] / g.length[axis];
}

// uhat_plus of sampled data at a tensor product of frequency queries.
std::vector<cplx> sampled_uhat_batch(const ComplexField& s, const std::vector<double>& q0,
                                     const std::vector<double>& q1) {
    const SpectralGrid& g = s.grid;
    if (g.dim == 1) {
        return trig_interpolate(unwrap_1d(s.v, g, 0), freq_box_length(g, 0), q0);
    }
    const int n0 = g.n[0], n1 = g.n[1];
    const std::size_t m0 = q0.size(), m1 = q1.size();
    // Pass 1: interpolate along axis 1 for every row.
    std::vector<cplx> mid(static_cast<std::size_t>(n0) * m1);
    std::vector<cplx> row(static_cast<std::size_t>(n1));
    for (int i0 = 0; i0 < n0; ++i0) {
        for (int k1 = 0; k1 < n1; ++k1) row[static_cast<std::size_t>(k1)] = s.v[s.idx(i0, k1)];
        auto vals = trig_interpolate(unwrap_1d(row, g, 1), freq_box_length(g, 1), q1);
        for (std::size_t j = 0; j < m1; ++j) mid[static_cast<std::size_t>(i0) * m1 + j] = vals[j];
    }
    // Pass 2: along axis 0 per interpolated column. Rows of `mid` follow the
    // wrapped axis-0 order inherited from s.
    std::vector<cplx> out(m0 * m1);
    std::vector<cplx> col(static_cast<std::size_t>(n0));
    for (std::size_t j = 0; j < m1; ++j) {
        for (int k0 = 0; k0 < n0; ++k0) col[static_cast<std::size_t>(k0)] = mid[static_cast<std::size_t>(k0) * m1 + j];
        auto vals = trig_interpolate(unwrap_1d(col, g, 0), freq_box_length(g, 0), q0);
        for (std::size_t i = 0; i < m0; ++i) out[i * m1 + j] = vals[i];
    }
    return out;
}

void require_positive_z2(double z2) {
    if (!(z2 > 0.0)) {
        std::ostringstream os;
        os << "profile: zeta2 = " << z2 << " must be positive at the evaluation time";
        throw domain_error(os.str());
    }
}

void require_after_matching(const FundamentalPair& pair, double t, const char* who) {
    if (!(t > pair.potential().r0)) {
        std::ostringstream os;
        os << who << ": t = " << t << " must exceed the matching radius r0 = "
           << pair.potential().r0;
        throw domain_error(os.str());
    }
}

void require_chirp(const SpectralGrid& g, double alpha, const char* label) {
    const double h = chirp_headroom(g, alpha);
    if (h > 1.0) {
        std::ostringstream os;
        os << label << ": chirp alpha = " << alpha
           << " violates the sampling criterion (headroom " << h << " > 1)";
        throw resolution_error(os.str());
    }
}

}  // namespace

FinalData make_gaussian_final_data(const ComplexGaussian& uhat_plus, double eps0) {
    if (!(eps0 > 0.0)) throw domain_error("final data: eps0 must be positive");
    FinalData d;
    d.analytic = true;
    d.gaussian = uhat_plus;
    d.amplitude_sup = uhat_plus.norm_sup();
    d.eps0 = eps0;
    return d;
}

FinalData make_sampled_final_data(const ComplexField& uhat_plus, double eps0) {
    if (!(eps0 > 0.0)) throw domain_error("final data: eps0 must be positive");
    FinalData d;
    d.analytic = false;
    d.sampled = uhat_plus;
    d.amplitude_sup = uhat_plus.norm_sup();
    d.eps0 = eps0;
    return d;
}

FinalData default_final_data(int dim, double eps0) {
    if (dim != 1 && dim != 2) throw domain_error("final data: dim must be 1 or 2");
    ComplexGaussian g;
    g.dim = dim;
    g.amplitude = cplx(0.5 * eps0, 0.0);
    g.center = {0.25, 0.25};
    g.momentum = {0.0, 0.0};
    g.width = cplx(1.0, 0.0);
    return make_gaussian_final_data(g, eps0);
}

ProfileParams make_profile_params(double g1, double c_plus, double p_c) {
    if (!(c_plus > 0.0)) throw domain_error("profile params: c_plus must be positive");
    if (!(p_c > 0.0)) throw domain_error("profile params: p_c must be positive");
    return ProfileParams{g1, c_plus, p_c};
}

cplx uhat_value(const FinalData& data, const std::array<double, 2>& xi) {
    if (data.analytic) return data.gaussian.value(xi);
    if (data.sampled.grid.dim == 1) {
        return sampled_uhat_batch(data.sampled, {xi[0]}, {})[0];
    }
    return sampled_uhat_batch(data.sampled, {xi[0]}, {xi[1]})[0];
}

cplx w_hat_value(const FinalData& data, const ProfileParams& pp, double t,
                 const std::array<double, 2>& xi) {
    if (!(t > 0.0)) throw domain_error("w_hat_value: t must be positive");
    const cplx a = uhat_value(data, xi);
    const double theta = -(pp.g1 / pp.c_plus) * std::pow(std::abs(a), pp.p_c) * std::log(t);
    return a * std::polar(1.0, theta);
}

ComplexField w_hat(const FinalData& data, const ProfileParams& pp, double t,
                   const SpectralGrid& grid) {
    if (!(t >= 1.0)) throw domain_error("w_hat: t must be >= 1");
    if (!data.analytic && !(data.sampled.grid == grid)) {
        throw domain_error("w_hat: sampled data lives on a different grid");
    }
    ComplexField out = ComplexField::zeros(grid);
    const double logt = std::log(t);
    const double rate = -pp.g1 / pp.c_plus;
    auto rotate = [&](cplx a) {
        return a * std::polar(1.0, rate * std::pow(std::abs(a), pp.p_c) * logt);
    };
    if (grid.dim == 1) {
        for (int k = 0; k < grid.n[0]; ++k) {
            const cplx a = data.analytic ? data.gaussian.value({grid.xi(0, k), 0.0})
                                         : data.sampled.v[data.sampled.idx(k)];
            out.v[out.idx(k)] = rotate(a);
        }
    } else {
        for (int k0 = 0; k0 < grid.n[0]; ++k0) {
            for (int k1 = 0; k1 < grid.n[1]; ++k1) {
                const cplx a = data.analytic
                                   ? data.gaussian.value({grid.xi(0, k0), grid.xi(1, k1)})
                                   : data.sampled.v[data.sampled.idx(k0, k1)];
                out.v[out.idx(k0, k1)] = rotate(a);
            }
        }
    }
    return out;
}

ComplexField u_p_field(const FundamentalPair& pair, const FinalData& data,
                       const ProfileParams& pp, double t, const SpectralGrid& grid) {
    require_after_matching(pair, t, "u_p_field");
    const ZetaSample zs = pair.value_at(t);
    require_positive_z2(zs.z2);
    const double alpha1 = zs.z2p / (2.0 * zs.z2);
    require_chirp(grid, alpha1, "u_p_field");

    const double logt = std::log(t);
    const double rate = -pp.g1 / pp.c_plus;
    const cplx pref = dilation_prefactor(zs.z2, grid.dim);

    // uhat_plus at the rescaled nodes, batched per axis for sampled data.
    std::vector<double> q0(static_cast<std::size_t>(grid.n[0]));
    for (int j = 0; j < grid.n[0]; ++j) q0[static_cast<std::size_t>(j)] = grid.x(0, j) / zs.z2;
    std::vector<double> q1;
    if (grid.dim == 2) {
        q1.resize(static_cast<std::size_t>(grid.n[1]));
        for (int j = 0; j < grid.n[1]; ++j) q1[static_cast<std::size_t>(j)] = grid.x(1, j) / zs.z2;
    }

    std::vector<cplx> uh;
    if (data.analytic) {
        if (grid.dim == 1) {
            uh.resize(q0.size());
            for (std::size_t j = 0; j < q0.size(); ++j) uh[j] = data.gaussian.value({q0[j], 0.0});
        } else {
            uh.resize(q0.size() * q1.size());
            for (std::size_t j0 = 0; j0 < q0.size(); ++j0)
                for (std::size_t j1 = 0; j1 < q1.size(); ++j1)
                    uh[j0 * q1.size() + j1] = data.gaussian.value({q0[j0], q1[j1]});
        }
    } else {
        uh = sampled_uhat_batch(data.sampled, q0, q1);
    }

    ComplexField out = ComplexField::zeros(grid);
    if (grid.dim == 1) {
        for (int j = 0; j < grid.n[0]; ++j) {
            const double x = grid.x(0, j);
            const cplx a = uh[static_cast<std::size_t>(j)];
            const double phase = alpha1 * x * x + rate * std::pow(std::abs(a), pp.p_c) * logt;
            out.v[out.idx(j)] = pref * a * std::polar(1.0, phase);
        }
    } else {
        for (int j0 = 0; j0 < grid.n[0]; ++j0) {
            for (int j1 = 0; j1 < grid.n[1]; ++j1) {
                const double x0 = grid.x(0, j0), x1 = grid.x(1, j1);
                const cplx a = uh[static_cast<std::size_t>(j0) * q1.size() + static_cast<std::size_t>(j1)];
                const double phase =
                    alpha1 * (x0 * x0 + x1 * x1) + rate * std::pow(std::abs(a), pp.p_c) * logt;
                out.v[out.idx(j0, j1)] = pref * a * std::polar(1.0, phase);
            }
        }
    }
    return out;
}

ComplexField remainder_R_apply(const FundamentalPair& pair, double t, const ComplexField& f) {
    require_after_matching(pair, t, "remainder_R_apply");
    const ZetaSample zs = pair.value_at(t);
    require_positive_z2(zs.z2);
    const double alpha1 = zs.z2p / (2.0 * zs.z2);
    const double alpha2 = zs.z1 / (2.0 * zs.z2);
    require_chirp(f.grid, alpha2, "remainder_R_apply (M2)");

    // (M2 - 1) on the position side.
    ComplexField g = f;
    fft_inverse(g);
    if (g.grid.dim == 1) {
        for (int j = 0; j < g.grid.n[0]; ++j) {
            const double y = g.grid.x(0, j);
            g.v[g.idx(j)] *= std::polar(1.0, alpha2 * y * y) - 1.0;
        }
    } else {
        for (int j0 = 0; j0 < g.grid.n[0]; ++j0)
            for (int j1 = 0; j1 < g.grid.n[1]; ++j1) {
                const double y0 = g.grid.x(0, j0), y1 = g.grid.x(1, j1);
                g.v[g.idx(j0, j1)] *= std::polar(1.0, alpha2 * (y0 * y0 + y1 * y1)) - 1.0;
            }
    }

    // D(zeta2) F: forward quadrature straight at the rescaled nodes.
    std::vector<double> q0(static_cast<std::size_t>(g.grid.n[0]));
    for (int j = 0; j < g.grid.n[0]; ++j) q0[static_cast<std::size_t>(j)] = g.grid.x(0, j) / zs.z2;
    std::vector<double> q1;
    if (g.grid.dim == 2) {
        q1.resize(static_cast<std::size_t>(g.grid.n[1]));
        for (int j = 0; j < g.grid.n[1]; ++j) q1[static_cast<std::size_t>(j)] = g.grid.x(1, j) / zs.z2;
    }
    ComplexField out = quad_transform_eval(g, q0, q1, -1);
    const cplx pref = dilation_prefactor(zs.z2, out.grid.dim);
    for (auto& v : out.v) v *= pref;
    apply_chirp(out, alpha1);
    return out;
}

double remainder_R_norm(const FundamentalPair& pair, double t, const ComplexField& f) {
    require_after_matching(pair, t, "remainder_R_norm");
    const ZetaSample zs = pair.value_at(t);
    require_positive_z2(zs.z2);
    const double alpha2 = zs.z1 / (2.0 * zs.z2);
    require_chirp(f.grid, alpha2, "remainder_R_norm (M2)");

    ComplexField g = f;
    fft_inverse(g);
    double acc = 0.0;
    if (g.grid.dim == 1) {
        for (int j = 0; j < g.grid.n[0]; ++j) {
            const double y = g.grid.x(0, j);
            const double m = 2.0 * std::abs(std::sin(0.5 * alpha2 * y * y));
            acc += m * m * std::norm(g.v[g.idx(j)]);
        }
    } else {
        for (int j0 = 0; j0 < g.grid.n[0]; ++j0)
            for (int j1 = 0; j1 < g.grid.n[1]; ++j1) {
                const double y0 = g.grid.x(0, j0), y1 = g.grid.x(1, j1);
                const double m = 2.0 * std::abs(std::sin(0.5 * alpha2 * (y0 * y0 + y1 * y1)));
                acc += m * m * std::norm(g.v[g.idx(j0, j1)]);
            }
    }
    return std::sqrt(acc * g.grid.cell_volume());
}

MembershipReport certify_membership(const FinalData& data, double delta, double delta_prime) {
    MembershipReport rep;
    if (!data.analytic) return rep;  // "unchecked"
    if (!(delta > 0.0) || !(delta_prime > 0.0)) {
        throw domain_error("certify_membership: weights must be positive");
    }
    const int d = data.gaussian.dim;
    const ComplexGaussian u = gauss::F_inv(data.gaussian);
    const double rw = u.width.real();

    // || <x>^{delta'} u_plus ||_2 by trapezoid over the decayed support.
    const double R = std::sqrt(80.0 / rw);
    double h0sq = 0.0;
    if (d == 1) {
        const int N = 20001;
        const double lo = u.center[0] - R, hi = u.center[0] + R, h = (hi - lo) / (N - 1);
        for (int i = 0; i < N; ++i) {
            const double x = lo + i * h;
            const double wgt = (i == 0 || i == N - 1) ? 0.5 : 1.0;
            h0sq += wgt * std::pow(1.0 + x * x, delta_prime) * std::norm(u.value1d(x)) * h;
        }
    } else {
        const int N = 801;
        const double lo0 = u.center[0] - R, lo1 = u.center[1] - R, h = 2.0 * R / (N - 1);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                const double x0 = lo0 + i * h, x1 = lo1 + j * h;
                double wgt = (i == 0 || i == N - 1) ? 0.5 : 1.0;
                wgt *= (j == 0 || j == N - 1) ? 0.5 : 1.0;
                h0sq += wgt * std::pow(1.0 + x0 * x0 + x1 * x1, delta_prime) *
                        std::norm(u.value({x0, x1})) * h * h;
            }
    }
    rep.h0_weighted = std::sqrt(h0sq);

    // Homogeneous negative-order seminorm: the |xi|^{-2 delta} weight is
    // non-integrable at the origin once 2 delta >= d unless uhat_plus(0) = 0.
    const double at0 = std::abs(data.gaussian.value({0.0, 0.0}));
    if (2.0 * delta >= d && at0 > 1e-300) {
        rep.status = "divergent";
        rep.hdot_negative = std::numeric_limits<double>::infinity();
        return rep;
    }
    const double rwf = data.gaussian.width.real();
    const double Rf = (std::abs(data.gaussian.center[0]) + std::abs(data.gaussian.center[1])) +
                      std::sqrt(80.0 / rwf);
    double hdsq = 0.0;
    if (d == 1) {
        // Absorb the singularity with u = sign(xi)|xi|^{1-2delta}/(1-2delta).
        const double ex = 1.0 - 2.0 * delta;
        const double umax = std::pow(Rf, ex) / ex;
        const int N = 40001;
        const double h = 2.0 * umax / (N - 1);
        for (int i = 0; i < N; ++i) {
            const double uvar = -umax + i * h;
            const double xi = (uvar >= 0 ? 1.0 : -1.0) * std::pow(ex * std::abs(uvar), 1.0 / ex);
            const double wgt = (i == 0 || i == N - 1) ? 0.5 : 1.0;
            hdsq += wgt * std::norm(data.gaussian.value({xi, 0.0})) * h;
        }
    } else {
        // Polar with v = r^{2-2delta}/(2-2delta) soaking up r^{1-2delta} dr.
        const double ex = 2.0 - 2.0 * delta;
        const double vmax = std::pow(Rf, ex) / ex;
        const int Nv = 4001, Np = 256;
        const double hv = vmax / (Nv - 1), hp = 2.0 * PI / Np;
        for (int i = 0; i < Nv; ++i) {
            const double v = i * hv;
            const double r = std::pow(ex * v, 1.0 / ex);
            const double wgt = (i == 0 || i == Nv - 1) ? 0.5 : 1.0;
            double ring = 0.0;
            for (int j = 0; j < Np; ++j) {
                const double phi = j * hp;
                ring += std::norm(data.gaussian.value({r * std::cos(phi), r * std::sin(phi)}));
            }
            hdsq += wgt * ring * hp * hv;
        }
    }
    rep.hdot_negative = std::sqrt(hdsq);
    rep.status = "finite";
    return rep;
}

void write_field_csv(const ComplexField& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("write_field_csv: cannot open " + path);
    os.precision(17);
    if (f.grid.dim == 1) {
        os << "x,re,im,abs\n";
        for (int j = 0; j < f.grid.n[0]; ++j) {
            const cplx v = f.v[f.idx(j)];
            os << f.grid.x(0, j) << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << '\n';
        }
    } else {
        os << "x0,x1,re,im,abs\n";
        for (int j0 = 0; j0 < f.grid.n[0]; ++j0)
            for (int j1 = 0; j1 < f.grid.n[1]; ++j1) {
                const cplx v = f.v[f.idx(j0, j1)];
                os << f.grid.x(0, j0) << ',' << f.grid.x(1, j1) << ',' << v.real() << ','
                   << v.imag() << ',' << std::abs(v) << '\n';
            }
    }
    if (!os.good()) throw io_error("write_field_csv: write failed for " + path);
}

}  // namespace nlslab
