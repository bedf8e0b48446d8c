#include "nlslab.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <utility>

#include "json.hpp"
#include "nlslab/common.hpp"
#include "nlslab/dynamics.hpp"
#include "nlslab/harness.hpp"
#include "nlslab/identities.hpp"
#include "nlslab/nonlinearity.hpp"
#include "nlslab/params.hpp"
#include "nlslab/potential.hpp"

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

// Run fn, translating the library's exception taxonomy into status codes.
template <typename Fn>
nlslab_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        return NLSLAB_OK;
    } catch (const nlslab::domain_error& e) {
        set_error(e.what());
        return NLSLAB_EDOMAIN;
    } catch (const nlslab::resolution_error& e) {
        set_error(e.what());
        return NLSLAB_ERESOLUTION;
    } catch (const nlslab::convergence_error& e) {
        set_error(e.what());
        return NLSLAB_ECONV;
    } catch (const nlslab::io_error& e) {
        set_error(e.what());
        return NLSLAB_EIO;
    } catch (const std::exception& e) {
        set_error(e.what());
        return NLSLAB_EFAIL;
    } catch (...) {
        set_error("unknown failure");
        return NLSLAB_EFAIL;
    }
}

nlslab_status require(bool ok, const char* what) {
    if (ok) return NLSLAB_OK;
    set_error(what);
    return NLSLAB_EINVAL;
}

nlslab_status emit_string(const std::string& text, char** out) {
    *out = dup_string(text);
    if (!*out) {
        set_error("out of memory");
        return NLSLAB_EFAIL;
    }
    return NLSLAB_OK;
}

json finite_or_inf(double v) {
    if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
    return json(v);
}

}  // namespace

extern "C" {

struct nlslab_zeta {
    nlslab::FundamentalPair pair;
};

struct nlslab_coeffs {
    nlslab::PeriodicSymbol symbol;
    nlslab::NonlinearityParams params;
    nlslab::CoefficientTable table;
};

const char* nlslab_last_error(void) { return g_last_error.c_str(); }

void nlslab_string_free(char* s) { std::free(s); }

nlslab_status nlslab_zeta_create(const char* kind, double sigma1, double r0, double tmax,
                                 nlslab_zeta** out) {
    if (nlslab_status st = require(kind && out, "zeta_create: null argument")) return st;
    const std::string k = kind ? kind : "";
    if (nlslab_status st = require(k == "zero" || k == "inverse-square" || k == "inverse_square",
                                   "zeta_create: unknown kind; expected zero or inverse-square")) {
        return st;
    }
    *out = nullptr;
    return guarded([&] {
        const nlslab::PotentialSpec spec = k == "zero"
                                               ? nlslab::make_zero_potential()
                                               : nlslab::make_inverse_square_potential(sigma1, r0);
        *out = new nlslab_zeta{nlslab::integrate_fundamental(spec, tmax)};
    });
}

void nlslab_zeta_free(nlslab_zeta* z) { delete z; }

nlslab_status nlslab_zeta_eval(const nlslab_zeta* z, double t, double out_vals[4]) {
    if (nlslab_status st = require(z && out_vals, "zeta_eval: null argument")) return st;
    return guarded([&] {
        const nlslab::ZetaSample s = z->pair.value_at(t);
        out_vals[0] = s.z1;
        out_vals[1] = s.z1p;
        out_vals[2] = s.z2;
        out_vals[3] = s.z2p;
    });
}

nlslab_status nlslab_zeta_wronskian_max(const nlslab_zeta* z, double* out) {
    if (nlslab_status st = require(z && out, "zeta_wronskian_max: null argument")) return st;
    return guarded([&] { *out = z->pair.wronskian_defect_max(); });
}

nlslab_status nlslab_zeta_asymptotics_json(const nlslab_zeta* z, char** out_json) {
    if (nlslab_status st = require(z && out_json, "zeta_asymptotics_json: null argument")) return st;
    *out_json = nullptr;
    nlslab_status rc = NLSLAB_OK;
    nlslab_status st = guarded([&] {
        const nlslab::Asymptotics a = nlslab::fit_asymptotics(z->pair);
        json j{{"lambda_hat", a.lambda_hat},
               {"lambda2_hat", a.lambda2_hat},
               {"rsq1", a.rsq1},
               {"c1", a.c1},
               {"c1_spread", a.c1_spread},
               {"c2", a.c2},
               {"c3", a.c3},
               {"c3_rel_resid", a.c3_rel_resid},
               {"c_plus", a.c_plus},
               {"expected_lambda", z->pair.potential().expected_lambda()},
               {"wronskian_defect_max", z->pair.wronskian_defect_max()}};
        rc = emit_string(j.dump(2) + "\n", out_json);
    });
    return st ? st : rc;
}

nlslab_status nlslab_zeta_write_csv(const nlslab_zeta* z, const char* path) {
    if (nlslab_status st = require(z && path, "zeta_write_csv: null argument")) return st;
    return guarded([&] { z->pair.write_csv(path); });
}

nlslab_status nlslab_coeffs_create(const char* symbol, double mu, int d, double lambda,
                                   int nmax, int quadrature_points, nlslab_coeffs** out) {
    if (nlslab_status st = require(symbol && out, "coeffs_create: null argument")) return st;
    const std::string s = symbol ? symbol : "";
    if (nlslab_status st =
            require(s == "gauge" || s == "re-power" || s == "re_power" || s == "short-range" ||
                        s == "short_range",
                    "coeffs_create: unknown symbol; expected gauge, re-power, or short-range")) {
        return st;
    }
    *out = nullptr;
    return guarded([&] {
        if (nmax <= 0) throw nlslab::domain_error("coeffs_create: nmax must be positive");
        if (quadrature_points < 0) {
            throw nlslab::domain_error("coeffs_create: quadrature_points must be >= 0");
        }
        const nlslab::NonlinearityParams params = nlslab::make_nl_params(d, lambda, 0.1);
        nlslab::PeriodicSymbol sym;
        if (s == "gauge") {
            sym = nlslab::make_gauge_symbol(mu);
            sym.p_c = params.p_c;
        } else if (s == "re-power" || s == "re_power") {
            sym = nlslab::make_re_power_symbol(params.p_c);
        } else {
            sym = nlslab::make_short_range_symbol(params.p_c);
        }
        nlslab::CoefficientTable table =
            nlslab::fourier_coefficients(sym, nmax, static_cast<size_t>(quadrature_points));
        *out = new nlslab_coeffs{std::move(sym), params, std::move(table)};
    });
}

void nlslab_coeffs_free(nlslab_coeffs* c) { delete c; }

nlslab_status nlslab_coeffs_get(const nlslab_coeffs* c, int n, double* re, double* im) {
    if (nlslab_status st = require(c && re && im, "coeffs_get: null argument")) return st;
    return guarded([&] {
        const nlslab::cplx g = c->table.coeff(n);
        *re = g.real();
        *im = g.imag();
    });
}

nlslab_status nlslab_coeffs_report_json(const nlslab_coeffs* c, char** out_json) {
    if (nlslab_status st = require(c && out_json, "coeffs_report_json: null argument")) return st;
    *out_json = nullptr;
    nlslab_status rc = NLSLAB_OK;
    nlslab_status st = guarded([&] {
        const nlslab::A2Report a2 = nlslab::check_A2(c->table, c->params);
        const nlslab::cplx g1 = c->table.coeff(1);
        json j{{"symbol", c->symbol.label},
               {"p_c", c->params.p_c},
               {"eta", c->params.eta},
               {"nmax", c->table.nmax},
               {"quadrature_points", c->table.quadrature_points},
               {"achieved", c->table.achieved},
               {"g1_re", g1.real()},
               {"g1_im", g1.imag()},
               {"g0_abs", a2.g0_abs},
               {"g1_imag_abs", a2.g1_imag_abs},
               {"decay_slope", a2.decay_slope},
               {"a_d", a2.a_d},
               {"weight_exponent", a2.weight_exponent},
               {"partial_sum", a2.partial_sum},
               {"tail_bound", finite_or_inf(a2.tail_bound)},
               {"g0_zero", a2.g0_zero},
               {"g1_real", a2.g1_real},
               {"sum_finite", a2.sum_finite},
               {"passed", a2.passed}};
        rc = emit_string(j.dump(2) + "\n", out_json);
    });
    return st ? st : rc;
}

nlslab_status nlslab_coeffs_write_csv(const nlslab_coeffs* c, const char* path) {
    if (nlslab_status st = require(c && path, "coeffs_write_csv: null argument")) return st;
    return guarded([&] { nlslab::write_coefficients_csv(c->table, path); });
}

nlslab_status nlslab_check_params_json(int d, double lambda, double eta, double delta,
                                       char** out_json) {
    if (nlslab_status st = require(out_json != nullptr, "check_params_json: null argument")) return st;
    *out_json = nullptr;
    nlslab_status rc = NLSLAB_OK;
    nlslab_status st = guarded([&] {
        const nlslab::ParamWindows w = nlslab::parameter_windows(d, lambda, eta, delta);
        json j{{"pass", true},
               {"d", w.d},
               {"lambda", w.lambda},
               {"eta", w.eta},
               {"lambda_max", w.lambda_max},
               {"p_c", w.p_c},
               {"a_d", w.a_d},
               {"delta_window", {w.delta_lo, w.delta_hi}},
               {"delta", w.delta},
               {"delta_prime", w.delta_prime},
               {"b_window_theorem", {w.b_lo_theorem, w.b_hi}},
               {"b_lo_proposition", w.b_lo_prop},
               {"eps1_required", w.eps1_required},
               {"eps1_feasible", w.eps1_feasible},
               {"eps1", w.eps1},
               {"admissible_pair", {w.q_d, finite_or_inf(w.r_d)}}};
        rc = emit_string(j.dump(2) + "\n", out_json);
    });
    return st ? st : rc;
}

nlslab_status nlslab_verify_identities_json(const char* which, char** out_json) {
    if (nlslab_status st = require(which && out_json, "verify_identities_json: null argument")) return st;
    const std::string w = which ? which : "";
    if (nlslab_status st =
            require(w == "mdfm" || w == "lens" || w == "factorization" || w == "all",
                    "verify_identities_json: unknown selector; expected mdfm, lens, "
                    "factorization, or all")) {
        return st;
    }
    *out_json = nullptr;
    nlslab_status rc = NLSLAB_OK;
    nlslab_status st = guarded([&] {
        const nlslab::IdentitySuite suite = nlslab::run_identity_suite(which);
        rc = emit_string(nlslab::identity_suite_json(suite), out_json);
    });
    return st ? st : rc;
}

nlslab_status nlslab_simulate(const char* config_path, const char* out_dir,
                              char** out_report_json) {
    if (nlslab_status st = require(config_path && out_dir && out_report_json,
                                   "simulate: null argument")) {
        return st;
    }
    *out_report_json = nullptr;
    nlslab_status rc = NLSLAB_OK;
    nlslab_status st = guarded([&] {
        const nlslab::ExperimentConfig cfg = nlslab::load_config(config_path);
        const nlslab::ResolvedExperiment rx = nlslab::make_solver_config(cfg);
        const nlslab::DecayReport report = cfg.experiment == "ablation"
                                               ? nlslab::ablation_no_log(rx.solver)
                                               : nlslab::final_state_experiment(rx.solver);
        nlslab::write_run_directory(out_dir, rx, report);
        rc = emit_string(nlslab::report_to_json(cfg, report, ""), out_report_json);
    });
    return st ? st : rc;
}

nlslab_status nlslab_report(const char* run_dir, char** out_report_json) {
    if (nlslab_status st = require(run_dir && out_report_json, "report: null argument")) return st;
    *out_report_json = nullptr;
    nlslab_status rc = NLSLAB_OK;
    nlslab_status st = guarded([&] {
        rc = emit_string(nlslab::report_from_rundir(run_dir), out_report_json);
    });
    return st ? st : rc;
}

}  // extern "C"
