#include "nlslab/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "nlslab/harness.hpp"
#include "nlslab/params.hpp"

namespace nlslab {

namespace {

std::vector<double> grid_xsq(const SpectralGrid& g) {
    std::vector<double> out(g.size());
    if (g.dim == 1) {
        for (int j = 0; j < g.n[0]; ++j) {
            const double x = g.x(0, j);
            out[static_cast<std::size_t>(j)] = x * x;
        }
    } else {
        for (int j0 = 0; j0 < g.n[0]; ++j0)
            for (int j1 = 0; j1 < g.n[1]; ++j1) {
                const double x0 = g.x(0, j0), x1 = g.x(1, j1);
                out[static_cast<std::size_t>(j0) * g.n[1] + j1] = x0 * x0 + x1 * x1;
            }
    }
    return out;
}

std::vector<double> grid_ksq(const SpectralGrid& g) {
    std::vector<double> out(g.size());
    if (g.dim == 1) {
        for (int k = 0; k < g.n[0]; ++k) {
            const double xi = g.xi(0, k);
            out[static_cast<std::size_t>(k)] = xi * xi;
        }
    } else {
        for (int k0 = 0; k0 < g.n[0]; ++k0)
            for (int k1 = 0; k1 < g.n[1]; ++k1) {
                const double a = g.xi(0, k0), b = g.xi(1, k1);
                out[static_cast<std::size_t>(k0) * g.n[1] + k1] = a * a + b * b;
            }
    }
    return out;
}

bool all_finite(const ComplexField& u) {
    for (const cplx& z : u.v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

bool f_vanishes(const SolverConfig& cfg) {
    return cfg.symbol.kind == PeriodicSymbol::Kind::gauge && cfg.symbol.mu == 0.0;
}

// exp(-i ksq tau) as a reusable multiplier table.
std::vector<cplx> kinetic_table(const std::vector<double>& ksq, double tau) {
    std::vector<cplx> out(ksq.size());
    for (std::size_t j = 0; j < ksq.size(); ++j) out[j] = std::polar(1.0, -ksq[j] * tau);
    return out;
}

void apply_spectral(ComplexField& u, const std::vector<cplx>& mult) {
    fft_forward(u);
    for (std::size_t j = 0; j < u.v.size(); ++j) u.v[j] *= mult[j];
    fft_inverse(u);
}

double sup_distance(const ComplexField& a, const ComplexField& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.v.size(); ++j) m = std::max(m, std::abs(a.v[j] - b.v[j]));
    return m;
}

}  // namespace

std::vector<double> log_spaced_times(double t0, double t1, int count) {
    if (!(t0 > 0.0) || !(t1 > t0) || count < 2) {
        throw domain_error("log_spaced_times: need 0 < t0 < t1 and count >= 2");
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    const double ratio = t1 / t0;
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = t0 * std::pow(ratio, static_cast<double>(i) / (count - 1));
    }
    out.front() = t0;
    out.back() = t1;
    return out;
}

void validate_solver_config(const SolverConfig& cfg) {
    if (!cfg.pair) throw domain_error("solver config: fundamental pair not set");
    const double r0 = cfg.pair->potential().r0;
    if (!(r0 < cfg.t0 && cfg.t0 < cfg.t1)) {
        std::ostringstream os;
        os << "solver config: need r0 < t0 < t1, got r0 = " << r0 << ", t0 = " << cfg.t0
           << ", t1 = " << cfg.t1;
        throw domain_error(os.str());
    }
    if (!(cfg.dt > 0.0) || cfg.dt > 0.05) {
        throw domain_error("solver config: dt must lie in (0, 0.05]");
    }
    if (cfg.t1 > cfg.pair->tmax() * (1.0 + 1e-12)) {
        throw domain_error("solver config: t1 exceeds the tabulated range of the fundamental pair");
    }
    if (cfg.grid.size() == 0) throw domain_error("solver config: empty grid");
    for (std::size_t i = 1; i < cfg.record_times.size(); ++i) {
        if (!(cfg.record_times[i] > cfg.record_times[i - 1])) {
            throw domain_error("solver config: record times must ascend");
        }
    }
    if (!cfg.record_times.empty()) {
        if (cfg.record_times.front() < cfg.t0 * (1.0 - 1e-12) ||
            cfg.record_times.back() > cfg.t1 * (1.0 + 1e-12)) {
            throw domain_error("solver config: record times must lie inside [t0, t1]");
        }
    }
    // Probe every chirp the run will see: the profile chirp zeta2'/(2 zeta2)
    // and the per-step potential phase sigma(t) dt/2.
    for (double t : log_spaced_times(cfg.t0, cfg.t1, 17)) {
        const ZetaSample zs = cfg.pair->value_at(t);
        if (!(zs.z2 > 0.0)) {
            std::ostringstream os;
            os << "solver config: zeta2(" << t << ") = " << zs.z2 << " is not positive";
            throw domain_error(os.str());
        }
        const double a1 = zs.z2p / (2.0 * zs.z2);
        if (chirp_headroom(cfg.grid, a1) > 1.0) {
            std::ostringstream os;
            os << "solver config: profile chirp at t = " << t
               << " violates the grid sampling criterion (alpha = " << a1 << ")";
            throw resolution_error(os.str());
        }
        const double apot = 0.5 * std::abs(cfg.pair->potential().eval(t)) * cfg.dt;
        if (chirp_headroom(cfg.grid, apot) > 1.0) {
            std::ostringstream os;
            os << "solver config: potential phase at t = " << t
               << " violates the grid sampling criterion";
            throw resolution_error(os.str());
        }
    }
}

ComplexField evolve_span(const SolverConfig& cfg, const ComplexField& u0, double t_from,
                         double t_to, const std::vector<double>& sample_times,
                         const SampleCallback& on_sample) {
    if (!(u0.grid == cfg.grid)) throw domain_error("evolve_span: state grid differs from config grid");
    if (sample_times.size() < 2) throw domain_error("evolve_span: need at least the two endpoints");
    const double dir = (t_to > t_from) ? 1.0 : -1.0;
    if (dir == 0.0 || t_to == t_from) throw domain_error("evolve_span: empty time span");
    const double tol = 1e-9 * std::max({1.0, std::abs(t_from), std::abs(t_to)});
    if (std::abs(sample_times.front() - t_from) > tol ||
        std::abs(sample_times.back() - t_to) > tol) {
        throw domain_error("evolve_span: sample times must start and end at the span endpoints");
    }
    for (std::size_t i = 1; i < sample_times.size(); ++i) {
        if (!((sample_times[i] - sample_times[i - 1]) * dir > 0.0)) {
            throw domain_error("evolve_span: sample times must be monotone toward the target");
        }
    }

    const std::vector<double> xsq = grid_xsq(cfg.grid);
    const std::vector<double> ksq = grid_ksq(cfg.grid);
    const bool skip_f = f_vanishes(cfg);
    const PotentialSpec& pot = cfg.pair->potential();

    auto nonlinear_rhs = [&](cplx z) { return cplx(0.0, -1.0) * evaluate_F(cfg.symbol, cfg.nl, z); };

    ComplexField u = u0;
    if (on_sample) on_sample(t_from, u);
    double t = t_from;

    for (std::size_t s = 1; s < sample_times.size(); ++s) {
        const double target = sample_times[s];
        const double span = target - t;
        const int m = std::max(1, static_cast<int>(std::ceil(std::abs(span) / cfg.dt - 1e-12)));
        const double h = span / m;
        const std::vector<cplx> kin_quarter = kinetic_table(ksq, 0.25 * h);
        const std::vector<cplx> kin_half = kinetic_table(ksq, 0.5 * h);

        // Strang with the touching half-kinetic factors of adjacent steps
        // fused into one full spectral multiplication.
        apply_spectral(u, kin_quarter);
        for (int i = 0; i < m; ++i) {
            const double ti = t + span * (static_cast<double>(i) / m);
            const double sig = pot.eval(ti + 0.5 * h);
            if (sig != 0.0) {
                const double c = -0.5 * sig * h;
                for (std::size_t j = 0; j < u.v.size(); ++j) {
                    u.v[j] *= std::polar(1.0, c * xsq[j]);
                }
            }
            if (!skip_f) {
                for (std::size_t j = 0; j < u.v.size(); ++j) {
                    cplx z = u.v[j];
                    const cplx k1 = nonlinear_rhs(z);
                    const cplx k2 = nonlinear_rhs(z + 0.5 * h * k1);
                    const cplx k3 = nonlinear_rhs(z + 0.5 * h * k2);
                    const cplx k4 = nonlinear_rhs(z + h * k3);
                    u.v[j] = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                }
            }
            apply_spectral(u, i + 1 < m ? kin_half : kin_quarter);
            if (!all_finite(u)) {
                std::ostringstream os;
                os << "evolution aborted: non-finite state at t = " << ti + h
                   << "; last good time = " << t;
                throw convergence_error(os.str());
            }
        }
        t = target;
        if (on_sample) on_sample(t, u);
    }
    return u;
}

Trajectory split_step_evolve(const SolverConfig& cfg, const ComplexField& u0) {
    validate_solver_config(cfg);
    const std::vector<double> records =
        cfg.record_times.empty() ? log_spaced_times(cfg.t0, cfg.t1, 33) : cfg.record_times;
    if (std::abs(records.front() - cfg.t0) > 1e-9 * cfg.t0 ||
        std::abs(records.back() - cfg.t1) > 1e-9 * cfg.t1) {
        throw domain_error("split_step_evolve: record times must span [t0, t1]");
    }
    Trajectory traj;
    traj.dim = cfg.grid.dim;
    auto cb = [&](double t, const ComplexField& u) {
        traj.times.push_back(t);
        traj.mass.push_back(u.norm_l2());
        traj.linf.push_back(u.norm_sup());
        for (double ts : cfg.snapshot_times) {
            if (std::abs(t - ts) <= 1e-9 * std::max(1.0, ts)) {
                traj.snapshot_times.push_back(t);
                traj.snapshots.push_back(u);
                break;
            }
        }
    };
    traj.final_field = evolve_span(cfg, u0, cfg.t0, cfg.t1, records, cb);
    return traj;
}

namespace {

// Residual-fit window: the backward leg pins r to zero at t1, so the clean
// power-law regime sits in the early half; the forward leg pins r(t0) = 0,
// so its informational fit starts past the initial ramp.
void fit_leg(LegResult& leg, double t0, double t1, bool backward) {
    const double geo = std::sqrt(t0 * t1);
    double lo = t0, hi = t1;
    if (backward) {
        hi = 0.5 * t1;
        if (hi <= t0 * 1.05) hi = geo;
    } else {
        lo = std::min(2.0 * t0, geo);
    }
    std::vector<double> ft, fy;
    for (std::size_t i = 0; i < leg.traj.times.size(); ++i) {
        const double t = leg.traj.times[i], y = leg.traj.residual_l2[i];
        if (t >= lo * (1.0 - 1e-12) && t <= hi * (1.0 + 1e-12) && y > 1e-13) {
            ft.push_back(t);
            fy.push_back(y);
        }
    }
    leg.fit_t_lo = lo;
    leg.fit_t_hi = hi;
    if (ft.size() >= 5) {
        const PowerLawFit f = fit_power_law(ft, fy);
        leg.slope = f.slope;
        leg.intercept = f.intercept;
        leg.r2 = f.r2;
    } else {
        leg.slope = leg.intercept = leg.r2 = std::numeric_limits<double>::quiet_NaN();
    }
}

DecayReport run_final_state(const SolverConfig& cfg, bool ablate) {
    validate_solver_config(cfg);
    if (!cfg.data.small_enough()) {
        std::ostringstream os;
        os << "final-state experiment: ||uhat_plus||_inf = " << cfg.data.amplitude_sup
           << " is not below the smallness threshold eps0 = " << cfg.data.eps0;
        throw domain_error(os.str());
    }
    const auto wall0 = std::chrono::steady_clock::now();

    ProfileParams meas = cfg.pp;
    if (ablate) meas.g1 = 0.0;
    const std::vector<double> records =
        cfg.record_times.empty() ? log_spaced_times(cfg.t0, cfg.t1, 49) : cfg.record_times;

    auto run_leg = [&](bool backward) {
        LegResult leg;
        leg.traj.dim = cfg.grid.dim;
        std::vector<double> samples = records;
        if (backward) std::reverse(samples.begin(), samples.end());
        const double seed_time = backward ? cfg.t1 : cfg.t0;
        // Seeds always use the corrected profile; ablation changes only the
        // measurement reference.
        const ComplexField seed = u_p_field(*cfg.pair, cfg.data, cfg.pp, seed_time, cfg.grid);
        double mass0 = -1.0;
        Trajectory& tr = leg.traj;
        auto cb = [&](double t, const ComplexField& u) {
            const ComplexField up = u_p_field(*cfg.pair, cfg.data, meas, t, cfg.grid);
            tr.times.push_back(t);
            tr.residual_l2.push_back(l2_distance(u, up));
            tr.residual_linf.push_back(sup_distance(u, up));
            const double mass = u.norm_l2();
            if (mass0 < 0.0) mass0 = mass;
            leg.mass_drift = std::max(leg.mass_drift, std::abs(mass - mass0));
            tr.mass.push_back(mass);
            tr.linf.push_back(u.norm_sup());
            if (!backward) {
                for (double ts : cfg.snapshot_times) {
                    if (std::abs(t - ts) <= 1e-9 * std::max(1.0, ts)) {
                        tr.snapshot_times.push_back(t);
                        tr.snapshots.push_back(u);
                        break;
                    }
                }
            }
        };
        tr.final_field =
            evolve_span(cfg, seed, samples.front(), samples.back(), samples, cb);
        if (backward) {
            std::reverse(tr.times.begin(), tr.times.end());
            std::reverse(tr.residual_l2.begin(), tr.residual_l2.end());
            std::reverse(tr.residual_linf.begin(), tr.residual_linf.end());
            std::reverse(tr.mass.begin(), tr.mass.end());
            std::reverse(tr.linf.begin(), tr.linf.end());
        }
        fit_leg(leg, cfg.t0, cfg.t1, backward);
        return leg;
    };

    DecayReport rep;
    rep.backward = run_leg(true);
    rep.forward = run_leg(false);
    rep.slope = rep.backward.slope;
    rep.intercept = rep.backward.intercept;
    rep.r2 = rep.backward.r2;
    rep.b = cfg.b;
    rep.lambda = cfg.nl.lambda;
    rep.threshold = -(cfg.b - cfg.nl.lambda);
    rep.margin = cfg.slope_margin;
    rep.pass = (rep.slope <= rep.threshold + rep.margin);

    rep.q_used = cfg.q_weight;
    rep.r_used = cfg.r_weight;
    rep.pair_admissible = is_admissible_pair(cfg.q_weight, cfg.r_weight, cfg.grid.dim);
    rep.tau_samples = cfg.tau_samples;
    const double scale_exp = cfg.b - 2.0 * cfg.nl.lambda;
    for (double tau : cfg.tau_samples) {
        const double w = weighted_norm(rep.forward.traj, cfg.q_weight, cfg.r_weight,
                                       cfg.nl.lambda, tau, cfg.t1);
        rep.weighted_norms.push_back(std::pow(tau, scale_exp) * w);
    }
    if (!rep.weighted_norms.empty()) {
        const double wmax = *std::max_element(rep.weighted_norms.begin(), rep.weighted_norms.end());
        const double wmin = *std::min_element(rep.weighted_norms.begin(), rep.weighted_norms.end());
        rep.weighted_spread = wmax > 0.0 ? (wmax - wmin) / wmax : 0.0;
    }

    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return rep;
}

}  // namespace

DecayReport final_state_experiment(const SolverConfig& cfg) { return run_final_state(cfg, false); }

DecayReport ablation_no_log(const SolverConfig& cfg) { return run_final_state(cfg, true); }

}  // namespace nlslab
