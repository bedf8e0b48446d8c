#pragma once

#include <limits>
#include <string>

#include "nlslab/common.hpp"

namespace nlslab {

// Every admissibility window the theorem imposes on (lambda, delta, delta',
// b, eps1, q, r) for a given dimension.
struct ParamWindows {
    int d = 1;
    double lambda = 0.0;
    double eta = 0.1;
    double lambda_max = 0.0;
    double p_c = 2.0;
    double a_d = 0.0;
    double delta_lo = 0.0, delta_hi = 0.0;  // open interval
    double delta = 0.0;                     // the delta in force (input or auto midpoint)
    double delta_prime = 1.0;               // 1 if d=1, delta otherwise
    double b_lo_theorem = 0.0, b_hi = 0.0;  // (2 lambda, lambda + delta(1-2lambda)/2)
    double b_lo_prop = 0.0;                 // tighter fixed-point-level lower bound
    bool eps1_required = false;             // d >= 2
    bool eps1_feasible = false;
    double eps1 = 0.0;                      // witness (midpoint of feasible interval)
    double q_d = 4.0, r_d = 0.0;            // r_d = infinity encoded as INFINITY
};

// Computes the windows; delta = NaN picks the window midpoint. Throws a
// domain error naming the violated bound when (d, lambda) or the requested
// delta is inadmissible.
ParamWindows parameter_windows(int d, double lambda, double eta,
                               double delta = std::numeric_limits<double>::quiet_NaN());

// 1/q + d/(2r) = d/4, q > 2, r >= 2, to 1e-12; infinities allowed.
bool is_admissible_pair(double q, double r, int d);

// Interior point of an open interval: midpoint, or a 1e-9 shrink from the
// nearest endpoint when a concrete value must hug one side.
double pick_interior(double lo, double hi);

}  // namespace nlslab
