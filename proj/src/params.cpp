#include "nlslab/params.hpp"

#include <cmath>
#include <sstream>

namespace nlslab {

namespace {

double lambda_ceiling(int d) {
    switch (d) {
        case 1: return 4.0 - std::sqrt(15.0);
        case 2: return 1.0 / 5.0;
        case 3: return (13.0 - 2.0 * std::sqrt(37.0)) / 21.0;
        default: return 0.0;
    }
}

double weight_a(int d, double lambda) {
    if (d == 1) return (6.0 * lambda - lambda * lambda) / (4.0 * (1.0 - 2.0 * lambda));
    return 3.0 * d * lambda / (4.0 * (1.0 - 2.0 * lambda));
}

[[noreturn]] void reject(const std::string& msg) { throw domain_error(msg); }

// Smoothing-estimate constraint at a given eps1, d >= 2. Two parts: the
// bracketed denominator must stay positive and the product inequality strict.
bool m3_holds(int d, double lambda, double eps) {
    const double den = d + (1.0 - 2.0 * d) * lambda - d * (1.0 - lambda) * eps;
    if (den <= 0.0) return false;
    const double lhs = (lambda + 1.0 + 2.0 * (1.0 - lambda) * lambda * eps) * den;
    return lhs > 2.0 * (1.0 - lambda);
}

// Norm-closing constraint: linear upper bound on eps1 once delta is fixed.
// Vacuous at lambda = 0 (reduces to d/2 < delta, already in the window).
bool m2_holds(int d, double lambda, double delta, double eps) {
    const double lhs = d * (lambda + 1.0) / (2.0 * (1.0 - 2.0 * lambda)) +
                       d * (1.0 - lambda) * lambda * eps / (1.0 - 2.0 * lambda);
    return lhs < delta;
}

}  // namespace

double pick_interior(double lo, double hi) {
    if (!(lo < hi)) reject("pick_interior: empty interval");
    const double mid = 0.5 * (lo + hi);
    if (mid > lo && mid < hi) return mid;
    // Degenerate width at double precision; nudge off the boundary.
    return lo + 1e-9 * (hi - lo);
}

bool is_admissible_pair(double q, double r, int d) {
    if (d < 1 || d > 3) return false;
    if (!(q > 2.0)) return false;
    if (!(r >= 2.0)) return false;
    const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
    const double ir = std::isinf(r) ? 0.0 : 1.0 / r;
    return std::abs(iq + 0.5 * d * ir - 0.25 * d) < 1e-12;
}

ParamWindows parameter_windows(int d, double lambda, double eta, double delta) {
    if (d < 1 || d > 3) reject("parameter_windows: d must be 1, 2, or 3");
    if (!(eta > 0.0) || eta > 1.0) reject("parameter_windows: eta must lie in (0, 1]");
    if (!(lambda >= 0.0)) reject("parameter_windows: lambda must be nonnegative");

    ParamWindows w;
    w.d = d;
    w.lambda = lambda;
    w.eta = eta;
    w.lambda_max = lambda_ceiling(d);
    if (!(lambda < w.lambda_max)) {
        std::ostringstream os;
        os << "parameter_windows: lambda = " << lambda << " violates lambda < "
           << w.lambda_max << " (d = " << d << " admissibility ceiling)";
        reject(os.str());
    }

    w.p_c = 2.0 / (d * (1.0 - lambda));
    w.a_d = weight_a(d, lambda);

    if (d == 1) {
        w.delta_lo = (1.0 + 4.0 * lambda - lambda * lambda) / (2.0 * (1.0 - 2.0 * lambda));
        w.delta_hi = std::min(1.0, 0.5 + 2.0 * w.a_d + 2.0 * eta);
    } else {
        w.delta_lo = d * (lambda + 1.0) / (2.0 * (1.0 - 2.0 * lambda));
        w.delta_hi = std::min({2.0, 1.0 + w.p_c, 0.5 * d + 2.0 * w.a_d + 2.0 * eta});
    }
    if (!(w.delta_lo < w.delta_hi)) {
        std::ostringstream os;
        os << "parameter_windows: empty delta window (" << w.delta_lo << ", "
           << w.delta_hi << ") for d = " << d << ", lambda = " << lambda;
        reject(os.str());
    }

    if (std::isnan(delta)) {
        w.delta = pick_interior(w.delta_lo, w.delta_hi);
    } else {
        if (!(delta > w.delta_lo && delta < w.delta_hi)) {
            std::ostringstream os;
            os << "parameter_windows: delta = " << delta << " outside ("
               << w.delta_lo << ", " << w.delta_hi << ")";
            reject(os.str());
        }
        w.delta = delta;
    }
    w.delta_prime = (d == 1) ? 1.0 : w.delta;

    w.b_lo_theorem = 2.0 * lambda;
    w.b_hi = lambda + 0.5 * w.delta * (1.0 - 2.0 * lambda);

    // eps1 enters only through the d >= 2 estimates; lambda = 0 is handled by
    // a separate argument that never invokes it, so infeasibility there is
    // reported but not fatal.
    w.eps1_required = (d >= 2);
    double eps_pair = 0.125;  // any interior value keeps the exponent pair admissible
    if (d >= 2) {
        double upper = 0.25;
        if (lambda > 0.0) {
            const double m2_cap = (2.0 * w.delta * (1.0 - 2.0 * lambda) - d * (lambda + 1.0)) /
                                  (2.0 * d * (1.0 - lambda) * lambda);
            upper = std::min(upper, m2_cap);
        }
        if (upper > 0.0 && !m3_holds(d, lambda, upper * 0.5)) {
            // Shrink by bisection to the largest cap whose midpoint witness
            // still satisfies the smoothing constraint.
            double lo = 0.0, hi = upper;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (m3_holds(d, lambda, mid)) lo = mid; else hi = mid;
            }
            upper = std::min(upper, lo);
        }
        if (upper > 0.0) {
            const double witness = 0.5 * upper;
            const bool ok = m2_holds(d, lambda, w.delta, witness) && m3_holds(d, lambda, witness);
            w.eps1_feasible = ok;
            w.eps1 = ok ? witness : 0.0;
            if (ok) eps_pair = witness;
        } else {
            w.eps1_feasible = false;
            w.eps1 = 0.0;
        }
    } else {
        w.eps1_feasible = true;
        w.eps1 = 0.0;
    }

    if (d == 1) {
        w.b_lo_prop = 0.25 * (1.0 + 8.0 * lambda - lambda * lambda);
        w.q_d = 4.0;
        w.r_d = std::numeric_limits<double>::infinity();
    } else {
        w.b_lo_prop = 0.25 * d * (lambda + 1.0) + lambda +
                      0.5 * d * (1.0 - lambda) * lambda * w.eps1;
        w.q_d = 2.0 / (1.0 - 2.0 * eps_pair);
        w.r_d = (d == 2) ? 1.0 / eps_pair : 6.0 / (1.0 + 4.0 * eps_pair);
    }

    return w;
}

}  // namespace nlslab
