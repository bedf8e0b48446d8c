#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlslab/common.hpp"

namespace nlslab {

// Time-dependent isotropic trap coefficient sigma(t) in the Hamiltonian
// -Laplacian/2 + sigma(t)|x|^2/2, together with the data the asymptotic
// theory attaches to it.
struct PotentialSpec {
    enum class Kind { zero, inverse_square, custom };

    Kind kind = Kind::zero;
    double sigma1 = 0.0;       // strength of the sigma1/t^2 tail
    double r0 = 1.0;           // matching radius for the early-time extension
    double lambda = 0.0;       // decay exponent of the recessive branch
    double sigma_below = 0.0;  // constant value taken on [0, r0)
    std::function<double(double)> fn;  // custom coefficient
    double custom_lambda = 0.0;        // caller-declared exponent for custom kind

    double eval(double t) const;
    // lim t^3 sigma'(t) for the built-in kinds (zero for kind zero).
    double expected_sigma0() const;
    double expected_lambda() const;
};

PotentialSpec make_zero_potential();
// Requires 0 <= sigma1 < 1/4, r0 > 0. Below r0 the coefficient is frozen at
// the negative constant -(s/r0)^2 with s tanh(s) = lambda, which makes the
// normalized even solution land exactly on the recessive power branch at r0.
PotentialSpec make_inverse_square_potential(double sigma1, double r0);
PotentialSpec make_custom_potential(std::function<double(double)> fn, double lambda_hint);

struct ZetaSample {
    double t = 0.0;
    double z1 = 1.0, z1p = 0.0;  // normalized solution: zeta1(0)=1, zeta1'(0)=0
    double z2 = 0.0, z2p = 1.0;  // companion: zeta2(0)=0, zeta2'(0)=1
    double wronskian_defect() const { return z1 * z2p - z1p * z2 - 1.0; }
};

// Fundamental pair of zeta'' + sigma(t) zeta = 0 tabulated on a graded mesh
// (uniform near 0, then logarithmic). value_at re-integrates locally from the
// nearest recorded node, so queries between nodes keep full accuracy.
class FundamentalPair {
  public:
    FundamentalPair(PotentialSpec spec, double tmax, double eta);

    const PotentialSpec& potential() const { return spec_; }
    double tmax() const { return tmax_; }
    const std::vector<ZetaSample>& samples() const { return samples_; }

    ZetaSample value_at(double t) const;
    double wronskian_defect_max() const;
    void write_csv(const std::string& path) const;

  private:
    ZetaSample advance(const ZetaSample& from, double t1) const;
    PotentialSpec spec_;
    double tmax_;
    double eta_;  // relative step control: h ~ eta * max(t, r0)
    std::vector<ZetaSample> samples_;
};

FundamentalPair integrate_fundamental(const PotentialSpec& spec, double tmax, double eta = 1e-3);

// Late-time structure extracted from the tabulated pair over the last two
// decades: zeta1 ~ c1 t^lambda, zeta2 ~ c2 t^(1-lambda) + c3 t^lambda.
struct Asymptotics {
    double lambda_hat = 0.0;   // log-log slope of zeta1
    double lambda2_hat = 0.0;  // log-log slope of zeta2 (should be 1 - lambda_hat)
    double rsq1 = 0.0;         // fit quality of the zeta1 slope
    double c1 = 0.0;
    double c1_spread = 0.0;  // max relative deviation of zeta1 / t^lambda_hat
    double c2 = 0.0;
    double c3 = 0.0;
    double c3_rel_resid = 0.0;  // residual of the two-term zeta2 fit
    double c_plus = 0.0;        // |c2|^(1/(1-lambda_hat))
};
Asymptotics fit_asymptotics(const FundamentalPair& pair);

struct A1Report {
    double wronskian_max = 0.0;
    double lambda_expected = 0.0;
    Asymptotics fit;
    double sigma0_hat = 0.0;  // numerical limit of t^3 sigma'(t)
    double sigma0_spread = 0.0;
    bool ok_wronskian = false;
    bool ok_recessive = false;  // zeta1 follows the t^lambda branch
    bool ok_dominant = false;   // zeta2 follows the t^(1-lambda) branch
    bool ok_constants = false;  // c1 c2 (1 - 2 lambda) = 1 within tolerance
    bool passed = false;
};
A1Report validate_A1(const FundamentalPair& pair, double tol = 1e-3);

}  // namespace nlslab
