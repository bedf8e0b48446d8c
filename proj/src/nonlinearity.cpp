#include "nlslab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "nlslab/fft.hpp"

namespace nlslab {

double critical_exponent(int d, double lambda) {
    if (d < 1 || d > 3) throw domain_error("critical_exponent: d must be 1, 2 or 3");
    if (!(lambda >= 0.0 && lambda < 0.5))
        throw domain_error("critical_exponent: lambda must lie in [0, 1/2)");
    return 2.0 / (d * (1.0 - lambda));
}

NonlinearityParams make_nl_params(int d, double lambda, double eta) {
    if (!(eta > 0.0)) throw domain_error("make_nl_params: eta must be positive");
    NonlinearityParams p;
    p.d = d;
    p.lambda = lambda;
    p.p_c = critical_exponent(d, lambda);
    p.eta = eta;
    return p;
}

namespace {

double signed_power(double v, double p) {
    // |v|^p * v, continuous through v = 0
    return v == 0.0 ? 0.0 : std::pow(std::abs(v), p) * v;
}

}  // namespace

cplx PeriodicSymbol::eval(double theta) const {
    switch (kind) {
        case Kind::gauge:
            return mu * std::polar(1.0, theta);
        case Kind::re_power:
            return signed_power(std::cos(theta), p_c);
        case Kind::short_range:
            return cplx(signed_power(std::cos(theta), p_c), -signed_power(std::sin(theta), p_c));
        case Kind::custom:
            return fn(theta);
    }
    throw domain_error("PeriodicSymbol::eval: unknown kind");
}

PeriodicSymbol make_gauge_symbol(double mu) {
    PeriodicSymbol s;
    s.kind = PeriodicSymbol::Kind::gauge;
    s.mu = mu;
    s.label = "gauge";
    return s;
}

PeriodicSymbol make_re_power_symbol(double p_c) {
    if (!(p_c > 0.0)) throw domain_error("make_re_power_symbol: p_c must be positive");
    PeriodicSymbol s;
    s.kind = PeriodicSymbol::Kind::re_power;
    s.p_c = p_c;
    s.label = "re-power";
    return s;
}

PeriodicSymbol make_short_range_symbol(double p_c) {
    if (!(p_c > 0.0)) throw domain_error("make_short_range_symbol: p_c must be positive");
    PeriodicSymbol s;
    s.kind = PeriodicSymbol::Kind::short_range;
    s.p_c = p_c;
    s.label = "short-range";
    return s;
}

PeriodicSymbol make_custom_symbol(std::function<cplx(double)> fn, std::string label) {
    if (!fn) throw domain_error("make_custom_symbol: empty evaluator");
    PeriodicSymbol s;
    s.kind = PeriodicSymbol::Kind::custom;
    s.fn = std::move(fn);
    s.label = std::move(label);
    return s;
}

cplx evaluate_F(const PeriodicSymbol& g, const NonlinearityParams& params, cplx z) {
    if (z == cplx(0.0, 0.0)) return 0.0;
    const double p = params.p_c;
    switch (g.kind) {
        case PeriodicSymbol::Kind::gauge:
            return g.mu * std::pow(std::abs(z), p) * z;
        case PeriodicSymbol::Kind::re_power:
            return signed_power(z.real(), p);
        case PeriodicSymbol::Kind::short_range:
            return cplx(signed_power(z.real(), p), -signed_power(z.imag(), p));
        case PeriodicSymbol::Kind::custom:
            return std::pow(std::abs(z), 1.0 + p) * g.fn(std::arg(z));
    }
    throw domain_error("evaluate_F: unknown kind");
}

cplx CoefficientTable::coeff(int n) const {
    if (n < -nmax || n > nmax) throw domain_error("CoefficientTable::coeff: index outside table");
    return c[static_cast<size_t>(n + nmax)];
}

namespace {

std::vector<cplx> table_at_level(const PeriodicSymbol& g, int nmax, size_t M) {
    std::vector<cplx> samples(M);
    for (size_t j = 0; j < M; ++j) samples[j] = g.eval(2.0 * PI * static_cast<double>(j) / static_cast<double>(M));
    fft::transform(samples.data(), M, -1);
    std::vector<cplx> out(static_cast<size_t>(2 * nmax + 1));
    for (int n = -nmax; n <= nmax; ++n) {
        const size_t k = static_cast<size_t>((n % static_cast<int>(M) + static_cast<int>(M)) % static_cast<int>(M));
        out[static_cast<size_t>(n + nmax)] = samples[k] / static_cast<double>(M);
    }
    return out;
}

}  // namespace

CoefficientTable fourier_coefficients(const PeriodicSymbol& g, int nmax, size_t M, double tol) {
    if (nmax < 1) throw domain_error("fourier_coefficients: nmax must be at least 1");
    if (!(tol > 0.0)) throw domain_error("fourier_coefficients: tol must be positive");
    size_t m = M;
    if (m == 0) {
        m = 256;
        while (m < 4 * static_cast<size_t>(nmax)) m *= 2;
    }
    if (!fft::is_pow2(m) || m < 4 * static_cast<size_t>(nmax))
        throw domain_error("fourier_coefficients: M must be a power of two with M >= 4 nmax");
    constexpr size_t kCap = size_t(1) << 22;
    std::vector<cplx> prev = table_at_level(g, nmax, m);
    while (true) {
        if (2 * m > kCap)
            throw convergence_error(
                "fourier_coefficients: quadrature did not settle below the doubling cap");
        std::vector<cplx> next = table_at_level(g, nmax, 2 * m);
        double diff = 0.0;
        for (size_t i = 0; i < prev.size(); ++i) diff = std::max(diff, std::abs(next[i] - prev[i]));
        if (diff <= tol) {
            CoefficientTable t;
            t.nmax = nmax;
            t.quadrature_points = 2 * m;
            t.tol = tol;
            t.achieved = diff;
            t.c = std::move(next);
            return t;
        }
        prev = std::move(next);
        m *= 2;
    }
}

ResonantSplit resonant_split(const CoefficientTable& table, const NonlinearityParams& params,
                             cplx u) {
    ResonantSplit out;
    if (u == cplx(0.0, 0.0)) return out;
    const double r = std::abs(u);
    const double theta = std::arg(u);
    const double amp = std::pow(r, 1.0 + params.p_c);
    // |u|^{1+p_c-n} u^n = |u|^{1+p_c} e^{i n theta} for every integer n
    out.resonant = table.coeff(1) * amp * std::polar(1.0, theta);
    out.zero_mode = table.coeff(0) * amp;
    cplx acc = 0.0;
    for (int n = -table.nmax; n <= table.nmax; ++n) {
        if (n == 0 || n == 1) continue;
        acc += table.coeff(n) * std::polar(1.0, n * theta);
    }
    out.nonresonant = amp * acc;
    return out;
}

double decay_exponent_fit(const CoefficientTable& table) {
    std::vector<double> lx, ly;
    for (int n = 5; n <= table.nmax; n += 2) {
        const double a = std::abs(table.coeff(n));
        if (a > 1e-13) {
            lx.push_back(std::log(static_cast<double>(n)));
            ly.push_back(std::log(a));
        }
    }
    if (lx.size() < 8) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double n = static_cast<double>(lx.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

A2Report check_A2(const CoefficientTable& table, const NonlinearityParams& params) {
    A2Report r;
    const double l = params.lambda;
    r.a_d = params.d == 1 ? (6.0 * l - l * l) / (4.0 * (1.0 - 2.0 * l))
                          : 3.0 * params.d * l / (4.0 * (1.0 - 2.0 * l));
    r.weight_exponent = 1.0 + r.a_d + params.eta;
    for (int n = -table.nmax; n <= table.nmax; ++n) {
        if (n == 0) continue;
        r.partial_sum += std::pow(std::abs(static_cast<double>(n)), r.weight_exponent) *
                         std::abs(table.coeff(n));
    }
    r.g0_abs = std::abs(table.coeff(0));
    r.g1_imag_abs = std::abs(table.coeff(1).imag());
    r.g0_zero = r.g0_abs < 1e-8;
    r.g1_real = r.g1_imag_abs < 1e-8;

    r.decay_slope = decay_exponent_fit(table);
    if (std::isnan(r.decay_slope)) {
        // Fewer than 8 live coefficients at |n| >= 5: the symbol is spectrally
        // compact at quadrature accuracy and the tail is negligible.
        r.tail_bound = 0.0;
        r.sum_finite = true;
    } else {
        // Tail estimated from the fitted power law, slowed by a 0.2 safety
        // margin; prefactor calibrated on the outer quarter of the table.
        const double slope_safe = r.decay_slope + 0.2;
        double pref = 0.0;
        for (int n = std::max(5, 3 * table.nmax / 4); n <= table.nmax; n += 2)
            pref = std::max(pref,
                            std::abs(table.coeff(n)) / std::pow(static_cast<double>(n), slope_safe));
        const double p = r.weight_exponent + slope_safe;
        if (p + 1.0 < 0.0) {
            r.tail_bound = 2.0 * pref * std::pow(static_cast<double>(table.nmax), p + 1.0) /
                           (-(p + 1.0));
            r.sum_finite = true;
        } else {
            r.tail_bound = std::numeric_limits<double>::infinity();
            r.sum_finite = false;
        }
    }
    r.passed = r.g0_zero && r.g1_real && r.sum_finite;
    return r;
}

void write_coefficients_csv(const CoefficientTable& table, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os.precision(17);
    os << "n,re_gn,im_gn,abs_gn\n";
    for (int n = -table.nmax; n <= table.nmax; ++n) {
        const cplx g = table.coeff(n);
        os << n << ',' << g.real() << ',' << g.imag() << ',' << std::abs(g) << '\n';
    }
    if (!os) throw io_error("failed while writing " + path);
}

}  // namespace nlslab
