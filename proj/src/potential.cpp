#include "nlslab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace nlslab {

namespace {

// Unique root of s*tanh(s) = lam on [0, 1]; the product is increasing and
// reaches ~0.76 at s=1, above any admissible lam < 1/2.
double solve_s(double lam) {
    if (lam <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid * std::tanh(mid) < lam)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double PotentialSpec::eval(double t) const {
    if (t < 0.0) throw domain_error("PotentialSpec::eval: negative time");
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::inverse_square:
            return t >= r0 ? sigma1 / (t * t) : sigma_below;
        case Kind::custom:
            return fn(t);
    }
    throw domain_error("PotentialSpec::eval: unknown kind");
}

double PotentialSpec::expected_sigma0() const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::inverse_square:
            return -2.0 * sigma1;
        case Kind::custom:
            return std::numeric_limits<double>::quiet_NaN();
    }
    return 0.0;
}

double PotentialSpec::expected_lambda() const {
    return kind == Kind::custom ? custom_lambda : lambda;
}

PotentialSpec make_zero_potential() {
    PotentialSpec p;
    p.kind = PotentialSpec::Kind::zero;
    return p;
}

PotentialSpec make_inverse_square_potential(double sigma1, double r0) {
    if (!(sigma1 >= 0.0 && sigma1 < 0.25))
        throw domain_error("make_inverse_square_potential: sigma1 must lie in [0, 1/4)");
    if (!(r0 > 0.0)) throw domain_error("make_inverse_square_potential: r0 must be positive");
    PotentialSpec p;
    p.kind = PotentialSpec::Kind::inverse_square;
    p.sigma1 = sigma1;
    p.r0 = r0;
    p.lambda = 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * sigma1));
    const double s = solve_s(p.lambda);
    p.sigma_below = -(s / r0) * (s / r0);
    return p;
}

PotentialSpec make_custom_potential(std::function<double(double)> fn, double lambda_hint) {
    if (!fn) throw domain_error("make_custom_potential: empty coefficient function");
    PotentialSpec p;
    p.kind = PotentialSpec::Kind::custom;
    p.fn = std::move(fn);
    p.custom_lambda = lambda_hint;
    return p;
}

namespace {

// Exact update over a step where sigma is the constant sc.
ZetaSample constant_step(const ZetaSample& y, double sc, double dt, double t1) {
    ZetaSample r;
    r.t = t1;
    double c, sh_over, s_sh;  // cosh-like, sinh/omega, omega*sinh factors
    if (sc == 0.0) {
        c = 1.0;
        sh_over = dt;
        s_sh = 0.0;
    } else if (sc < 0.0) {
        const double s = std::sqrt(-sc);
        c = std::cosh(s * dt);
        sh_over = std::sinh(s * dt) / s;
        s_sh = s * std::sinh(s * dt);
    } else {
        const double w = std::sqrt(sc);
        c = std::cos(w * dt);
        sh_over = std::sin(w * dt) / w;
        s_sh = -w * std::sin(w * dt);
    }
    r.z1 = y.z1 * c + y.z1p * sh_over;
    r.z1p = y.z1 * s_sh + y.z1p * c;
    r.z2 = y.z2 * c + y.z2p * sh_over;
    r.z2p = y.z2 * s_sh + y.z2p * c;
    return r;
}

struct State4 {
    double a, b, c, d;
};

State4 deriv(const PotentialSpec& spec, double t, const State4& y) {
    const double s = spec.eval(t);
    return {y.b, -s * y.a, y.d, -s * y.c};
}

ZetaSample rk4_span(const PotentialSpec& spec, const ZetaSample& from, double t1, double eta,
                    double href) {
    const double t0 = from.t;
    const double span = t1 - t0;
    if (span == 0.0) {
        ZetaSample r = from;
        r.t = t1;
        return r;
    }
    const double htarget = eta * std::max(std::min(t0, t1), href);
    const long m = std::max(1L, static_cast<long>(std::ceil(std::abs(span) / htarget)));
    const double h = span / static_cast<double>(m);
    State4 y{from.z1, from.z1p, from.z2, from.z2p};
    double t = t0;
    for (long i = 0; i < m; ++i) {
        const State4 k1 = deriv(spec, t, y);
        const State4 y2{y.a + 0.5 * h * k1.a, y.b + 0.5 * h * k1.b, y.c + 0.5 * h * k1.c,
                        y.d + 0.5 * h * k1.d};
        const State4 k2 = deriv(spec, t + 0.5 * h, y2);
        const State4 y3{y.a + 0.5 * h * k2.a, y.b + 0.5 * h * k2.b, y.c + 0.5 * h * k2.c,
                        y.d + 0.5 * h * k2.d};
        const State4 k3 = deriv(spec, t + 0.5 * h, y3);
        const State4 y4{y.a + h * k3.a, y.b + h * k3.b, y.c + h * k3.c, y.d + h * k3.d};
        const State4 k4 = deriv(spec, t + h, y4);
        y.a += h * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a) / 6.0;
        y.b += h * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b) / 6.0;
        y.c += h * (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c) / 6.0;
        y.d += h * (k1.d + 2.0 * k2.d + 2.0 * k3.d + k4.d) / 6.0;
        t = t0 + span * static_cast<double>(i + 1) / static_cast<double>(m);
    }
    ZetaSample r;
    r.t = t1;
    r.z1 = y.a;
    r.z1p = y.b;
    r.z2 = y.c;
    r.z2p = y.d;
    return r;
}

}  // namespace

ZetaSample FundamentalPair::advance(const ZetaSample& from, double t1) const {
    if (t1 < from.t) throw domain_error("FundamentalPair::advance: backward query");
    switch (spec_.kind) {
        case PotentialSpec::Kind::zero:
            return constant_step(from, 0.0, t1 - from.t, t1);
        case PotentialSpec::Kind::inverse_square: {
            ZetaSample cur = from;
            if (cur.t < spec_.r0) {
                const double mid = std::min(t1, spec_.r0);
                cur = constant_step(cur, spec_.sigma_below, mid - cur.t, mid);
            }
            if (t1 > cur.t) cur = rk4_span(spec_, cur, t1, eta_, spec_.r0);
            return cur;
        }
        case PotentialSpec::Kind::custom:
            return rk4_span(spec_, from, t1, eta_, std::max(spec_.r0, 1e-3));
    }
    throw domain_error("FundamentalPair::advance: unknown kind");
}

FundamentalPair::FundamentalPair(PotentialSpec spec, double tmax, double eta)
    : spec_(std::move(spec)), tmax_(tmax), eta_(eta) {
    if (!(tmax > 0.0)) throw domain_error("FundamentalPair: tmax must be positive");
    if (!(eta > 0.0 && eta <= 0.1)) throw domain_error("FundamentalPair: eta must lie in (0, 0.1]");
    std::vector<double> ts;
    ts.push_back(0.0);
    const double tu = std::min(10.0 * std::max(spec_.r0, 1e-3), tmax);
    const int nu = 256;
    for (int k = 1; k <= nu; ++k) ts.push_back(tu * static_cast<double>(k) / nu);
    if (tu < tmax) {
        const double decades = std::log10(tmax / tu);
        const int nl = std::max(2, static_cast<int>(std::ceil(64.0 * decades)));
        for (int k = 1; k <= nl; ++k)
            ts.push_back(tu * std::pow(tmax / tu, static_cast<double>(k) / nl));
    }
    ts.back() = tmax;
    samples_.reserve(ts.size());
    ZetaSample cur;  // exact initial conditions at t = 0
    samples_.push_back(cur);
    for (size_t i = 1; i < ts.size(); ++i) {
        cur = advance(cur, ts[i]);
        samples_.push_back(cur);
    }
}

ZetaSample FundamentalPair::value_at(double t) const {
    if (t < 0.0) throw domain_error("FundamentalPair::value_at: negative time");
    if (t > tmax_ * (1.0 + 1e-12))
        throw domain_error("FundamentalPair::value_at: beyond tabulated range");
    t = std::min(t, tmax_);
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                               [](double v, const ZetaSample& s) { return v < s.t; });
    const ZetaSample& base = *std::prev(it);
    if (base.t == t) return base;
    return advance(base, t);
}

double FundamentalPair::wronskian_defect_max() const {
    double m = 0.0;
    for (const ZetaSample& s : samples_) m = std::max(m, std::abs(s.wronskian_defect()));
    return m;
}

void FundamentalPair::write_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os.precision(17);
    os << "t,zeta1,zeta1p,zeta2,zeta2p,wronskian_defect\n";
    for (const ZetaSample& s : samples_)
        os << s.t << ',' << s.z1 << ',' << s.z1p << ',' << s.z2 << ',' << s.z2p << ','
           << s.wronskian_defect() << '\n';
    if (!os) throw io_error("failed while writing " + path);
}

FundamentalPair integrate_fundamental(const PotentialSpec& spec, double tmax, double eta) {
    return FundamentalPair(spec, tmax, eta);
}

namespace {

struct SlopeFit {
    double slope, intercept, rsq;
};

SlopeFit least_squares_loglog(const std::vector<double>& ts, const std::vector<double>& vs) {
    const size_t n = ts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(n), ly(n);
    for (size_t i = 0; i < n; ++i) {
        lx[i] = std::log(ts[i]);
        ly[i] = std::log(vs[i]);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double dn = static_cast<double>(n);
    const double det = dn * sxx - sx * sx;
    SlopeFit f;
    f.slope = (dn * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / dn;
    double ss_res = 0, ss_tot = 0;
    const double ym = sy / dn;
    for (size_t i = 0; i < n; ++i) {
        const double pred = f.intercept + f.slope * lx[i];
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - ym) * (ly[i] - ym);
    }
    f.rsq = ss_tot > 1e-18 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

}  // namespace

Asymptotics fit_asymptotics(const FundamentalPair& pair) {
    const double tmax = pair.tmax();
    std::vector<double> ts, v1, v2;
    for (const ZetaSample& s : pair.samples()) {
        if (s.t >= tmax / 100.0 && s.t > 0.0) {
            ts.push_back(s.t);
            v1.push_back(s.z1);
            v2.push_back(s.z2);
        }
    }
    if (ts.size() < 8)
        throw convergence_error("fit_asymptotics: need at least 8 samples in the last two decades");
    for (size_t i = 0; i < ts.size(); ++i)
        if (v1[i] <= 0.0 || v2[i] <= 0.0)
            throw convergence_error(
                "fit_asymptotics: fundamental solution changes sign in the fit window");

    Asymptotics a;
    const SlopeFit f1 = least_squares_loglog(ts, v1);
    const SlopeFit f2 = least_squares_loglog(ts, v2);
    a.lambda_hat = f1.slope;
    a.lambda2_hat = f2.slope;
    a.rsq1 = f1.rsq;

    double mean = 0.0;
    std::vector<double> ratio(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) {
        ratio[i] = v1[i] / std::pow(ts[i], a.lambda_hat);
        mean += ratio[i];
    }
    mean /= static_cast<double>(ts.size());
    a.c1 = mean;
    for (double r : ratio) a.c1_spread = std::max(a.c1_spread, std::abs(r - mean) / std::abs(mean));

    if (std::abs(1.0 - 2.0 * a.lambda_hat) < 0.02)
        throw convergence_error(
            "fit_asymptotics: branch exponents too close to separate the companion constant");
    // two-parameter fit zeta2 = c2 t^(1-lam) + c3 t^lam, solved by normal
    // equations; direct subtraction of the leading term would cancel
    // catastrophically at large t.
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    const double lam = a.lambda_hat;
    for (size_t i = 0; i < ts.size(); ++i) {
        const double p1 = std::pow(ts[i], 1.0 - lam);
        const double p2 = std::pow(ts[i], lam);
        s11 += p1 * p1;
        s12 += p1 * p2;
        s22 += p2 * p2;
        b1 += p1 * v2[i];
        b2 += p2 * v2[i];
    }
    const double det = s11 * s22 - s12 * s12;
    if (std::abs(det) <= 1e-14 * s11 * s22)
        throw convergence_error("fit_asymptotics: normal equations are singular");
    a.c2 = (s22 * b1 - s12 * b2) / det;
    a.c3 = (s11 * b2 - s12 * b1) / det;
    double resid = 0, ref = 0;
    for (size_t i = 0; i < ts.size(); ++i) {
        const double pred = a.c2 * std::pow(ts[i], 1.0 - lam) + a.c3 * std::pow(ts[i], lam);
        resid += (v2[i] - pred) * (v2[i] - pred);
        ref += v2[i] * v2[i];
    }
    a.c3_rel_resid = std::sqrt(resid / ref);
    a.c_plus = std::pow(std::abs(a.c2), 1.0 / (1.0 - lam));
    return a;
}

A1Report validate_A1(const FundamentalPair& pair, double tol) {
    A1Report r;
    r.wronskian_max = pair.wronskian_defect_max();
    r.lambda_expected = pair.potential().expected_lambda();
    r.fit = fit_asymptotics(pair);
    r.ok_wronskian = r.wronskian_max <= 1e-9;
    r.ok_recessive = std::abs(r.fit.lambda_hat - r.lambda_expected) <= tol && r.fit.rsq1 >= 0.999 &&
                     r.fit.c1_spread <= 0.01;
    r.ok_dominant = std::abs(r.fit.lambda2_hat - (1.0 - r.lambda_expected)) <= tol;
    r.ok_constants =
        std::abs(r.fit.c1 * r.fit.c2 * (1.0 - 2.0 * r.fit.lambda_hat) - 1.0) <= 0.02;

    // Informational: does t^3 sigma'(t) settle? Probed by central differences
    // at three late times; not part of the pass gate.
    const PotentialSpec& spec = pair.potential();
    const double tmax = pair.tmax();
    std::vector<double> probes;
    for (double frac : {0.25, 0.5, 0.9}) {
        const double t = frac * tmax;
        const double h = 1e-4 * t;
        if (t - h <= spec.r0) continue;
        const double d = (spec.eval(t + h) - spec.eval(t - h)) / (2.0 * h);
        probes.push_back(t * t * t * d);
    }
    if (!probes.empty()) {
        r.sigma0_hat = probes.back();
        for (double v : probes) r.sigma0_spread = std::max(r.sigma0_spread, std::abs(v - r.sigma0_hat));
    } else {
        r.sigma0_hat = std::numeric_limits<double>::quiet_NaN();
    }
    r.passed = r.ok_wronskian && r.ok_recessive && r.ok_dominant && r.ok_constants;
    return r;
}

}  // namespace nlslab
