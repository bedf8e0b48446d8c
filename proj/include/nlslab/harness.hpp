#pragma once

#include <string>
#include <vector>

#include "nlslab/dynamics.hpp"
#include "nlslab/nonlinearity.hpp"
#include "nlslab/params.hpp"
#include "nlslab/potential.hpp"
#include "nlslab/profile.hpp"

namespace nlslab {

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;  // of log y vs log t
    double r2 = 0.0;
};

// Least squares on (log t, log y). Needs >= 5 strictly positive samples.
PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y);

struct WeightedNormValue {
    double value = 0.0;  // (int_tau^t1 <s>^{-lambda} ||f(s)||_r^q ds)^{1/q}, or the sup form
    double tail = 0.0;   // estimated contribution beyond t1, reported, never added
};

// Trapezoid over the recorded samples of the residual series selected by r
// (r = 2 or r = infinity; those are the recorded norms). q = infinity gives
// sup_{s in [tau, t1]} <s>^{-lambda} ||f(s)||_r. Admissibility of (q, r) is
// the caller's concern; this routine checks only that it can integrate.
WeightedNormValue weighted_norm_full(const Trajectory& traj, double q, double r, double lambda,
                                     double tau, double t1);
double weighted_norm(const Trajectory& traj, double q, double r, double lambda, double tau,
                     double t1);

// Plain-data experiment description, the on-disk configuration format.
struct ExperimentConfig {
    int dimension = 1;
    std::string potential_kind = "inverse_square";  // "zero" | "inverse_square"
    double sigma1 = 0.09;
    double r0 = 1.0;
    std::string symbol = "gauge";  // "gauge" | "re_power" | "short_range"
    double mu = 1.0;
    int nmax = 64;
    double lambda = 0.1;
    double eta = 0.1;
    double delta = 0.95;
    double b = 0.46;
    double amplitude = 0.1;  // ||uhat_plus||_inf of the Gaussian datum
    double xi0 = 0.25;
    double width = 1.0;
    double eps0 = 0.5;
    int grid_n = 0;           // 0: size from the chirp criterion at t0
    double grid_length = 0.0; // 0: size from the support rule
    double t0 = 20.0;
    double t1 = 120.0;
    double dt = 0.02;
    int record_count = 49;
    int snapshot_count = 8;
    std::string experiment = "final_state";  // "final_state" | "ablation"
    std::vector<double> tau_samples{30.0, 50.0, 80.0};
    double slope_margin = 0.15;

    bool operator==(const ExperimentConfig&) const = default;
};

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);  // named schema errors
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

// Config materialized into runnable pieces, plus every admissibility fact
// worth echoing into reports.
struct ResolvedExperiment {
    ExperimentConfig config;
    SolverConfig solver;
    ParamWindows windows;
    Asymptotics asym;
    A2Report a2;
    MembershipReport membership;
};

ResolvedExperiment make_solver_config(const ExperimentConfig& cfg);

// Run directory layout: trajectory.csv (forward leg, header exactly
// t,residual_l2,mass,linf), trajectory_backward.csv (same header),
// snapshots/*.csv, meta.json (resolved config, windows, fits, norms, and the
// auxiliary sup-norm residual series).
void write_run_directory(const std::string& dir, const ResolvedExperiment& rx,
                         const DecayReport& report);

std::string report_to_json(const ExperimentConfig& cfg, const DecayReport& report,
                           const std::string& identities_json);
// Rebuild the report document from a run directory's meta.json, refreshing
// the identity-suite residuals.
std::string report_from_rundir(const std::string& rundir);

void write_text_file(const std::string& text, const std::string& path);

}  // namespace nlslab
