#ifndef NLSLAB_H
#define NLSLAB_H

/* C interface to the nlslab core. Every entry point returns a status code;
 * on any nonzero status the thread-local message behind nlslab_last_error()
 * describes what went wrong. Strings returned through char** out-parameters
 * are heap copies owned by the caller; release them with nlslab_string_free.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nlslab_status {
    NLSLAB_OK = 0,
    NLSLAB_EINVAL = 1,      /* malformed call: null pointer, bad enum string */
    NLSLAB_EDOMAIN = 2,     /* arguments outside the admissible region */
    NLSLAB_ERESOLUTION = 3, /* a grid or quadrature cannot resolve the request */
    NLSLAB_ECONV = 4,       /* an evolution or iteration failed to converge */
    NLSLAB_EIO = 5,         /* file system or format failure */
    NLSLAB_EFAIL = 6        /* anything else */
} nlslab_status;

/* Message for the most recent failure on this thread; never NULL. */
const char* nlslab_last_error(void);
void nlslab_string_free(char* s);

/* ---- fundamental pair of the time-dependent oscillator ---- */

typedef struct nlslab_zeta nlslab_zeta;

/* kind: "zero" or "inverse-square". sigma1 and r0 are ignored for "zero". */
nlslab_status nlslab_zeta_create(const char* kind, double sigma1, double r0,
                                 double tmax, nlslab_zeta** out);
void nlslab_zeta_free(nlslab_zeta* z);

/* out_vals = { zeta1, zeta1p, zeta2, zeta2p } at time t. */
nlslab_status nlslab_zeta_eval(const nlslab_zeta* z, double t, double out_vals[4]);
nlslab_status nlslab_zeta_wronskian_max(const nlslab_zeta* z, double* out);
/* Fitted growth exponents and constants, as a JSON document. */
nlslab_status nlslab_zeta_asymptotics_json(const nlslab_zeta* z, char** out_json);
/* Columns: t,zeta1,zeta1p,zeta2,zeta2p,wronskian_defect */
nlslab_status nlslab_zeta_write_csv(const nlslab_zeta* z, const char* path);

/* ---- Fourier coefficients of a periodic symbol ---- */

typedef struct nlslab_coeffs nlslab_coeffs;

/* symbol: "gauge", "re-power", or "short-range"; mu is the gauge weight and
 * is ignored for the other symbols. d and lambda fix the critical exponent.
 * quadrature_points = 0 picks the default resolution (doubled until the
 * coefficients stabilize). */
nlslab_status nlslab_coeffs_create(const char* symbol, double mu, int d, double lambda,
                                   int nmax, int quadrature_points, nlslab_coeffs** out);
void nlslab_coeffs_free(nlslab_coeffs* c);

nlslab_status nlslab_coeffs_get(const nlslab_coeffs* c, int n, double* re, double* im);
/* Resonant/zero-mode summary plus the decay fit, as a JSON document. */
nlslab_status nlslab_coeffs_report_json(const nlslab_coeffs* c, char** out_json);
/* Columns: n,re_gn,im_gn,abs_gn */
nlslab_status nlslab_coeffs_write_csv(const nlslab_coeffs* c, const char* path);

/* ---- admissible parameter windows ---- */

/* Pass delta = NaN to let the midpoint rule choose it inside its window.
 * The JSON report carries every window bound and the chosen values. */
nlslab_status nlslab_check_params_json(int d, double lambda, double eta, double delta,
                                       char** out_json);

/* ---- operator identity suite ---- */

/* which: "mdfm", "lens", "factorization", or "all". */
nlslab_status nlslab_verify_identities_json(const char* which, char** out_json);

/* ---- experiment pipeline ---- */

/* Reads a JSON experiment configuration, runs the paired-leg experiment, and
 * writes trajectory.csv, trajectory_backward.csv, snapshots/, and meta.json
 * into out_dir (created if absent). The returned JSON is the run report. */
nlslab_status nlslab_simulate(const char* config_path, const char* out_dir,
                              char** out_report_json);

/* Rebuilds the report document from an existing run directory. */
nlslab_status nlslab_report(const char* run_dir, char** out_report_json);

#ifdef __cplusplus
}
#endif

#endif /* NLSLAB_H */
