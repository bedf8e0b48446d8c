#include "nlslab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nlslab/identities.hpp"

namespace nlslab {

using nlohmann::json;

PowerLawFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw domain_error("fit_power_law: length mismatch");
    if (t.size() < 5) throw domain_error("fit_power_law: need at least 5 points");
    const std::size_t n = t.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(t[i] > 0.0) || !(y[i] > 0.0)) {
            throw domain_error("fit_power_law: values must be strictly positive");
        }
        lx[i] = std::log(t[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx <= 0.0) throw domain_error("fit_power_law: degenerate abscissa (all times equal)");
    PowerLawFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (syy <= 1e-30) {
        f.r2 = 1.0;  // exactly constant series: the zero-slope fit is perfect
    } else {
        f.r2 = (sxy * sxy) / (sxx * syy);
    }
    return f;
}

namespace {

const std::vector<double>& series_for_r(const Trajectory& traj, double r) {
    if (r == 2.0) {
        if (traj.residual_l2.empty()) throw domain_error("weighted_norm: no L2 residual series");
        return traj.residual_l2;
    }
    if (std::isinf(r)) {
        if (traj.residual_linf.empty()) throw domain_error("weighted_norm: no sup residual series");
        return traj.residual_linf;
    }
    std::ostringstream os;
    os << "weighted_norm: no recorded series for r = " << r << " (have r = 2 and r = inf)";
    throw domain_error(os.str());
}

double bracket_weight(double s, double lambda) {
    return std::pow(1.0 + s * s, -0.5 * lambda);
}

}  // namespace

WeightedNormValue weighted_norm_full(const Trajectory& traj, double q, double r, double lambda,
                                     double tau, double t1) {
    if (!(q >= 1.0)) throw domain_error("weighted_norm: q must be >= 1 (or infinite)");
    const std::vector<double>& y = series_for_r(traj, r);
    const std::vector<double>& ts = traj.times;
    if (ts.size() != y.size() || ts.size() < 2) throw domain_error("weighted_norm: bad series");
    if (!(tau >= ts.front() * (1.0 - 1e-12)) || !(tau < t1)) {
        std::ostringstream os;
        os << "weighted_norm: tau = " << tau << " outside the recorded range [" << ts.front()
           << ", " << t1 << ")";
        throw domain_error(os.str());
    }
    if (t1 > ts.back() * (1.0 + 1e-12)) {
        throw domain_error("weighted_norm: t1 beyond the recorded range");
    }

    WeightedNormValue out;
    if (std::isinf(q)) {
        double m = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (ts[i] >= tau * (1.0 - 1e-12) && ts[i] <= t1 * (1.0 + 1e-12)) {
                m = std::max(m, bracket_weight(ts[i], lambda) * y[i]);
            }
        }
        out.value = m;
        out.tail = 0.0;  // the sup form has no truncation tail to estimate
        return out;
    }

    // Integrand h(s) = <s>^{-lambda} y(s)^q on [tau, t1], trapezoid with a
    // linearly interpolated partial first cell when tau falls between samples.
    auto integrand = [&](std::size_t i) { return bracket_weight(ts[i], lambda) * std::pow(y[i], q); };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const double a = ts[i], bnd = ts[i + 1];
        if (bnd <= tau || a >= t1) continue;
        const double lo = std::max(a, tau), hi = std::min(bnd, t1);
        const double ha = integrand(i), hb = integrand(i + 1);
        const double fa = ha + (hb - ha) * (lo - a) / (bnd - a);
        const double fb = ha + (hb - ha) * (hi - a) / (bnd - a);
        acc += 0.5 * (fa + fb) * (hi - lo);
    }
    out.value = std::pow(acc, 1.0 / q);

    // Tail past t1 from the fitted late-time decay of y, in norm units.
    std::vector<double> tt, ty;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] >= 0.5 * t1 && y[i] > 1e-15) {
            tt.push_back(ts[i]);
            ty.push_back(y[i]);
        }
    }
    if (tt.size() >= 5) {
        try {
            const PowerLawFit f = fit_power_law(tt, ty);
            const double p = q * f.slope - lambda;
            if (p < -1.0) {
                const double c = std::exp(q * f.intercept);
                out.tail = std::pow(c * std::pow(t1, p + 1.0) / (-(p + 1.0)), 1.0 / q);
            } else {
                out.tail = std::numeric_limits<double>::infinity();
            }
        } catch (const error&) {
            out.tail = 0.0;
        }
    }
    return out;
}

double weighted_norm(const Trajectory& traj, double q, double r, double lambda, double tau,
                     double t1) {
    return weighted_norm_full(traj, q, r, lambda, tau, t1).value;
}

namespace {

json config_to_json_obj(const ExperimentConfig& c) {
    return json{
        {"dimension", c.dimension},
        {"potential", {{"kind", c.potential_kind}, {"sigma1", c.sigma1}, {"r0", c.r0}}},
        {"nonlinearity", {{"symbol", c.symbol}, {"mu", c.mu}, {"nmax", c.nmax}}},
        {"params",
         {{"lambda", c.lambda}, {"eta", c.eta}, {"delta", c.delta}, {"b", c.b},
          {"slope_margin", c.slope_margin}}},
        {"final_data",
         {{"kind", "gaussian"}, {"amplitude", c.amplitude}, {"xi0", c.xi0}, {"width", c.width},
          {"eps0", c.eps0}}},
        {"grid", {{"n", c.grid_n}, {"length", c.grid_length}}},
        {"time",
         {{"t0", c.t0}, {"t1", c.t1}, {"dt", c.dt}, {"record_count", c.record_count},
          {"snapshot_count", c.snapshot_count}}},
        {"experiment", c.experiment},
        {"tau_samples", c.tau_samples},
    };
}

[[noreturn]] void schema_fail(const std::string& field, const std::string& why) {
    throw io_error("config: field '" + field + "' " + why);
}

const json& need(const json& j, const std::string& path) {
    const json* cur = &j;
    std::size_t pos = 0;
    while (pos <= path.size()) {
        const std::size_t dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (!cur->is_object() || !cur->contains(key)) schema_fail(path, "is missing");
        cur = &(*cur)[key];
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return *cur;
}

double need_number(const json& j, const std::string& path) {
    const json& v = need(j, path);
    if (!v.is_number()) schema_fail(path, "must be a number");
    return v.get<double>();
}

int need_int(const json& j, const std::string& path) {
    const json& v = need(j, path);
    if (!v.is_number_integer()) schema_fail(path, "must be an integer");
    return v.get<int>();
}

std::string need_string(const json& j, const std::string& path) {
    const json& v = need(j, path);
    if (!v.is_string()) schema_fail(path, "must be a string");
    return v.get<std::string>();
}

double opt_number(const json& j, const std::string& outer, const std::string& key, double dflt) {
    if (!j.contains(outer) || !j[outer].is_object() || !j[outer].contains(key)) return dflt;
    const json& v = j[outer][key];
    if (!v.is_number()) schema_fail(outer + "." + key, "must be a number");
    return v.get<double>();
}

int opt_int(const json& j, const std::string& outer, const std::string& key, int dflt) {
    if (!j.contains(outer) || !j[outer].is_object() || !j[outer].contains(key)) return dflt;
    const json& v = j[outer][key];
    if (!v.is_number_integer()) schema_fail(outer + "." + key, "must be an integer");
    return v.get<int>();
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_to_json_obj(cfg).dump(2) + "\n"; }

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw io_error(std::string("config: not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    c.dimension = need_int(j, "dimension");
    if (c.dimension != 1 && c.dimension != 2) schema_fail("dimension", "must be 1 or 2");
    c.potential_kind = need_string(j, "potential.kind");
    if (c.potential_kind != "zero" && c.potential_kind != "inverse_square") {
        schema_fail("potential.kind", "must be 'zero' or 'inverse_square'");
    }
    c.sigma1 = opt_number(j, "potential", "sigma1", c.potential_kind == "zero" ? 0.0 : 0.09);
    c.r0 = opt_number(j, "potential", "r0", 1.0);
    c.symbol = need_string(j, "nonlinearity.symbol");
    if (c.symbol != "gauge" && c.symbol != "re_power" && c.symbol != "short_range") {
        schema_fail("nonlinearity.symbol", "must be 'gauge', 're_power', or 'short_range'");
    }
    c.mu = opt_number(j, "nonlinearity", "mu", 1.0);
    c.nmax = opt_int(j, "nonlinearity", "nmax", 64);
    c.lambda = need_number(j, "params.lambda");
    c.eta = opt_number(j, "params", "eta", 0.1);
    c.delta = opt_number(j, "params", "delta", std::numeric_limits<double>::quiet_NaN());
    c.b = opt_number(j, "params", "b", std::numeric_limits<double>::quiet_NaN());
    c.slope_margin = opt_number(j, "params", "slope_margin", 0.15);
    c.amplitude = opt_number(j, "final_data", "amplitude", 0.1);
    c.xi0 = opt_number(j, "final_data", "xi0", 0.25);
    c.width = opt_number(j, "final_data", "width", 1.0);
    c.eps0 = opt_number(j, "final_data", "eps0", 0.5);
    c.grid_n = opt_int(j, "grid", "n", 0);
    c.grid_length = opt_number(j, "grid", "length", 0.0);
    c.t0 = need_number(j, "time.t0");
    c.t1 = need_number(j, "time.t1");
    c.dt = need_number(j, "time.dt");
    c.record_count = opt_int(j, "time", "record_count", 49);
    c.snapshot_count = opt_int(j, "time", "snapshot_count", 8);
    if (j.contains("experiment")) {
        if (!j["experiment"].is_string()) schema_fail("experiment", "must be a string");
        c.experiment = j["experiment"].get<std::string>();
        if (c.experiment != "final_state" && c.experiment != "ablation") {
            schema_fail("experiment", "must be 'final_state' or 'ablation'");
        }
    }
    if (j.contains("tau_samples")) {
        if (!j["tau_samples"].is_array()) schema_fail("tau_samples", "must be an array of numbers");
        c.tau_samples.clear();
        for (const auto& v : j["tau_samples"]) {
            if (!v.is_number()) schema_fail("tau_samples", "must be an array of numbers");
            c.tau_samples.push_back(v.get<double>());
        }
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return config_from_json(ss.str());
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    write_text_file(config_to_json(cfg), path);
}

void write_text_file(const std::string& text, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os << text;
    if (!os.good()) throw io_error("write failed for " + path);
}

ResolvedExperiment make_solver_config(const ExperimentConfig& cfg) {
    ResolvedExperiment rx;
    rx.config = cfg;

    // Admissibility first: everything downstream depends on the windows.
    rx.windows = parameter_windows(cfg.dimension, cfg.lambda, cfg.eta, cfg.delta);
    const double delta = rx.windows.delta;

    PotentialSpec spec;
    if (cfg.potential_kind == "zero") {
        spec = make_zero_potential();
    } else {
        spec = make_inverse_square_potential(cfg.sigma1, cfg.r0);
    }
    if (std::abs(spec.expected_lambda() - cfg.lambda) > 1e-6) {
        std::ostringstream os;
        os << "config: lambda = " << cfg.lambda << " mismatches the potential's exponent "
           << spec.expected_lambda();
        throw domain_error(os.str());
    }

    double b = cfg.b;
    if (std::isnan(b)) b = pick_interior(rx.windows.b_lo_prop, rx.windows.b_hi);
    if (!(b > rx.windows.b_lo_theorem && b < rx.windows.b_hi)) {
        std::ostringstream os;
        os << "config: b = " << b << " outside the window (" << rx.windows.b_lo_theorem << ", "
           << rx.windows.b_hi << ")";
        throw domain_error(os.str());
    }

    SolverConfig& sc = rx.solver;
    sc.nl = make_nl_params(cfg.dimension, cfg.lambda, cfg.eta);
    if (cfg.symbol == "gauge") {
        sc.symbol = make_gauge_symbol(cfg.mu);
        sc.symbol.p_c = sc.nl.p_c;
    } else if (cfg.symbol == "re_power") {
        sc.symbol = make_re_power_symbol(sc.nl.p_c);
    } else {
        sc.symbol = make_short_range_symbol(sc.nl.p_c);
    }
    sc.table = fourier_coefficients(sc.symbol, cfg.nmax);
    rx.a2 = check_A2(sc.table, sc.nl);

    // Long-horizon tabulation: the experiment window needs values up to t1,
    // the asymptotic constants need a couple of late decades.
    const double tmax = std::max(1e6, cfg.t1 * 4.0);
    auto pair = std::make_shared<FundamentalPair>(spec, tmax, 1e-3);
    rx.asym = fit_asymptotics(*pair);
    sc.pair = pair;

    const double g1 = sc.table.coeff(1).real();
    sc.pp = make_profile_params(g1, rx.asym.c_plus, sc.nl.p_c);

    ComplexGaussian uhat;
    uhat.dim = cfg.dimension;
    uhat.amplitude = cplx(cfg.amplitude, 0.0);
    uhat.center = {cfg.xi0, cfg.xi0};
    uhat.momentum = {0.0, 0.0};
    uhat.width = cplx(cfg.width, 0.0);
    sc.data = make_gaussian_final_data(uhat, cfg.eps0);
    rx.membership = certify_membership(sc.data, delta, rx.windows.delta_prime);

    // Grid sizing. Box: the profile support runs with x ~ zeta2(t) xi, and
    // 2.5 t1 (|xi0| + 4/sqrt(width)) dominates it for the kinds in use.
    double L = cfg.grid_length;
    if (L <= 0.0) L = 2.5 * cfg.t1 * (std::abs(cfg.xi0) + 4.0 / std::sqrt(cfg.width));
    int n = cfg.grid_n;
    if (n <= 0) {
        // Smallest power of two admitting the profile chirp at t0 (worst case).
        const ZetaSample zs = pair->value_at(cfg.t0);
        const double a1 = std::abs(zs.z2p / (2.0 * zs.z2));
        const double needed = 2.0 * a1 * (0.5 * L) * L / (0.8 * PI);
        n = 256;
        while (n < needed && n < (1 << 24)) n *= 2;
    }
    sc.grid = cfg.dimension == 1 ? SpectralGrid::make1d(n, L) : SpectralGrid::make2d(n, L, n, L);

    sc.t0 = cfg.t0;
    sc.t1 = cfg.t1;
    sc.dt = cfg.dt;
    sc.b = b;
    sc.slope_margin = cfg.slope_margin;
    sc.tau_samples = cfg.tau_samples;
    sc.record_times = log_spaced_times(cfg.t0, cfg.t1, std::max(2, cfg.record_count));
    if (cfg.snapshot_count > 1) {
        // Snap the snapshot times onto recorded samples.
        for (double ts : log_spaced_times(cfg.t0, cfg.t1, cfg.snapshot_count)) {
            double best = sc.record_times.front();
            for (double tr : sc.record_times) {
                if (std::abs(tr - ts) < std::abs(best - ts)) best = tr;
            }
            if (sc.snapshot_times.empty() || sc.snapshot_times.back() != best) {
                sc.snapshot_times.push_back(best);
            }
        }
    }
    if (cfg.dimension == 1) {
        sc.q_weight = 4.0;
        sc.r_weight = std::numeric_limits<double>::infinity();
    } else {
        sc.q_weight = rx.windows.q_d;
        sc.r_weight = rx.windows.r_d;
    }

    validate_solver_config(sc);
    return rx;
}

namespace {

json windows_to_json(const ParamWindows& w) {
    json j{{"d", w.d},
           {"lambda", w.lambda},
           {"eta", w.eta},
           {"lambda_max", w.lambda_max},
           {"p_c", w.p_c},
           {"a_d", w.a_d},
           {"delta_window", {w.delta_lo, w.delta_hi}},
           {"delta", w.delta},
           {"delta_prime", w.delta_prime},
           {"b_window_theorem", {w.b_lo_theorem, w.b_hi}},
           {"b_window_prop", {w.b_lo_prop, w.b_hi}},
           {"eps1_required", w.eps1_required},
           {"eps1_feasible", w.eps1_feasible},
           {"eps1", w.eps1},
           {"q_d", w.q_d}};
    j["r_d"] = std::isinf(w.r_d) ? json("inf") : json(w.r_d);
    return j;
}

json leg_to_json(const LegResult& leg) {
    return json{{"slope", leg.slope},          {"intercept", leg.intercept},
                {"r2", leg.r2},                {"fit_window", {leg.fit_t_lo, leg.fit_t_hi}},
                {"mass_drift", leg.mass_drift}};
}

json report_core_json(const DecayReport& rep) {
    json j{{"slope", rep.slope},
           {"intercept", rep.intercept},
           {"r2", rep.r2},
           {"threshold", rep.threshold},
           {"margin", rep.margin},
           {"pass", rep.pass},
           {"b", rep.b},
           {"lambda", rep.lambda},
           {"backward_leg", leg_to_json(rep.backward)},
           {"forward_leg", leg_to_json(rep.forward)},
           {"weighted_norms",
            {{"q", rep.q_used},
             {"r", std::isinf(rep.r_used) ? json("inf") : json(rep.r_used)},
             {"pair_admissible", rep.pair_admissible},
             {"tau", rep.tau_samples},
             {"scaled_values", rep.weighted_norms},
             {"spread", rep.weighted_spread}}},
           {"runtime_seconds", rep.runtime_seconds}};
    return j;
}

void write_series_csv(const std::string& path, const Trajectory& tr) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os.precision(17);
    os << "t,residual_l2,mass,linf\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double r = i < tr.residual_l2.size() ? tr.residual_l2[i] : 0.0;
        os << tr.times[i] << ',' << r << ',' << tr.mass[i] << ',' << tr.linf[i] << '\n';
    }
    if (!os.good()) throw io_error("write failed for " + path);
}

}  // namespace

void write_run_directory(const std::string& dir, const ResolvedExperiment& rx,
                         const DecayReport& report) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(dir) / "snapshots", ec);
    if (ec) throw io_error("cannot create run directory " + dir + ": " + ec.message());

    write_series_csv((fs::path(dir) / "trajectory.csv").string(), report.forward.traj);
    write_series_csv((fs::path(dir) / "trajectory_backward.csv").string(), report.backward.traj);

    for (std::size_t i = 0; i < report.forward.traj.snapshots.size(); ++i) {
        std::ostringstream name;
        name << "snapshot_t" << report.forward.traj.snapshot_times[i] << ".csv";
        write_field_csv(report.forward.traj.snapshots[i],
                        (fs::path(dir) / "snapshots" / name.str()).string());
    }

    json meta;
    meta["config"] = json::parse(config_to_json(rx.config));
    meta["windows"] = windows_to_json(rx.windows);
    meta["asymptotics"] = {{"lambda_hat", rx.asym.lambda_hat},
                           {"lambda2_hat", rx.asym.lambda2_hat},
                           {"c1", rx.asym.c1},
                           {"c2", rx.asym.c2},
                           {"c3", rx.asym.c3},
                           {"c_plus", rx.asym.c_plus}};
    meta["coefficients"] = {{"g1", rx.solver.pp.g1},
                            {"g0_abs", rx.a2.g0_abs},
                            {"g1_imag_abs", rx.a2.g1_imag_abs},
                            {"a2_passed", rx.a2.passed}};
    meta["membership"] = {{"status", rx.membership.status},
                          {"h0_weighted", rx.membership.h0_weighted},
                          {"hdot_negative", std::isinf(rx.membership.hdot_negative)
                                                ? json("inf")
                                                : json(rx.membership.hdot_negative)}};
    meta["report"] = report_core_json(report);
    meta["series"] = {{"times", report.forward.traj.times},
                      {"residual_linf_forward", report.forward.traj.residual_linf},
                      {"residual_linf_backward", report.backward.traj.residual_linf},
                      {"residual_l2_backward", report.backward.traj.residual_l2}};
    write_text_file(meta.dump(2) + "\n", (fs::path(dir) / "meta.json").string());
}

std::string report_to_json(const ExperimentConfig& cfg, const DecayReport& report,
                           const std::string& identities_json) {
    json j = report_core_json(report);
    j["config"] = json::parse(config_to_json(cfg));
    if (!identities_json.empty()) {
        j["identity_residuals"] = json::parse(identities_json);
    }
    return j.dump(2) + "\n";
}

std::string report_from_rundir(const std::string& rundir) {
    namespace fs = std::filesystem;
    const std::string meta_path = (fs::path(rundir) / "meta.json").string();
    std::ifstream is(meta_path);
    if (!is) throw io_error("report: cannot open " + meta_path);
    json meta;
    try {
        std::stringstream ss;
        ss << is.rdbuf();
        meta = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw io_error(std::string("report: meta.json is not valid JSON: ") + e.what());
    }
    if (!meta.contains("report") || !meta.contains("config")) {
        throw io_error("report: meta.json lacks the report/config blocks");
    }
    json j = meta["report"];
    j["config"] = meta["config"];
    if (meta.contains("windows")) j["windows"] = meta["windows"];
    j["identity_residuals"] = json::parse(identity_suite_json(run_identity_suite("all")));
    return j.dump(2) + "\n";
}

}  // namespace nlslab
