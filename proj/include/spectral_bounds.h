/* C interface to the spectral bounds library.
 *
 * Conventions: functions returning sb_status report failures through the
 * return code and record a message retrievable with sb_last_error() (thread
 * local, overwritten by the next failing call on the same thread).  Functions
 * returning double report failure as NaN.  Strings returned through char**
 * are heap-allocated; release them with sb_string_free().  Opaque handles are
 * released with their matching _free function; freeing NULL is a no-op.
 */
#ifndef SPECTRAL_BOUNDS_H
#define SPECTRAL_BOUNDS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sb_status {
  SB_OK = 0,
  SB_ERR_INVALID_ARGUMENT = 1, /* precondition violated */
  SB_ERR_PARSE = 2,            /* malformed file, case spec, or report */
  SB_ERR_NO_CONVERGENCE = 3,   /* iterative solver or root finder stalled */
  SB_ERR_QUADRATURE = 4,       /* quadrature tolerance not met */
  SB_ERR_UNVERIFIED = 5,       /* a requested inequality failed to verify */
  SB_ERR_INTERNAL = 6
} sb_status;

typedef struct sb_domain sb_domain;
typedef struct sb_spectrum sb_spectrum;

const char* sb_version(void);
const char* sb_last_error(void);
void sb_string_free(char* s);

/* Domains.  Boxes take d side lengths (1 <= d <= 6); balls support d <= 3;
 * masks are 2-d occupancy grids in the documented text format. */
sb_status sb_domain_box(const double* lengths, int d, sb_domain** out);
sb_status sb_domain_ball(int d, double radius, sb_domain** out);
sb_status sb_domain_mask_load(const char* path, sb_domain** out);
sb_status sb_domain_mask_parse(const char* text, sb_domain** out);
/* Cell-splitting refinement until max(width, height) >= target. */
sb_status sb_domain_mask_refine(const sb_domain* mask, int target, sb_domain** out);
void sb_domain_free(sb_domain* domain);
int sb_domain_dimension(const sb_domain* domain);
double sb_domain_volume(const sb_domain* domain);
double sb_domain_inertia(const sb_domain* domain);

/* Spectra.  Eigenvalue indices are 1-based. */
sb_status sb_spectrum_analytic(const sb_domain* domain, long count, sb_spectrum** out);
/* FDM spectra require a mask domain; tol <= 0 selects the default (1e-8). */
sb_status sb_spectrum_fdm(const sb_domain* mask, int count, double tol,
                          sb_spectrum** out);
sb_status sb_spectrum_fdm_richardson(const sb_domain* mask, int count, double tol,
                                     sb_spectrum** out);
void sb_spectrum_free(sb_spectrum* s);
long sb_spectrum_count(const sb_spectrum* s);
double sb_spectrum_eigenvalue(const sb_spectrum* s, long n);
const char* sb_spectrum_provenance(const sb_spectrum* s);
sb_status sb_spectrum_csv(const sb_spectrum* s, char** out);

/* Closed-form bounds and special functions. */
double sb_liyau_sum_bound(long n, int d, double volume);
double sb_liyau_single_bound(long n, int d, double volume);
double sb_polya_bound(long n, int d, double volume);
double sb_faber_krahn_bound(int d, double volume);
double sb_melas_bound(long n, int d, double volume, double inertia, double c);
/* 1 admissible, 0 not, -1 on error. */
int sb_two_point_admissible(long n, long l, int d);
double sb_two_point_factor(long n, long l, int d);
double sb_concentration_factor(double eta, int d);
double sb_bessel_zero(double nu, int k);
double sb_gamma(double x);

/* Drivers.  Verification reports are JSON; sb_verify_* fill *report_json on
 * both SB_OK and SB_ERR_UNVERIFIED. */
sb_status sb_verify_file(const char* case_path, char** report_json);
sb_status sb_verify_default(char** report_json);
/* Default matrix with a Melas sweep added under the given constant. */
sb_status sb_verify_default_melas(double melas_c, char** report_json);
sb_status sb_default_cases(char** cases_json);
sb_status sb_scan_tsv(const sb_domain* domain, const char* quantity, long n_max,
                      char** tsv);
sb_status sb_eta_json(const sb_domain* domain, int k, char** json_text);
sb_status sb_eta_profile_tsv(const sb_domain* domain, int k, char** tsv);
sb_status sb_report_schema(char** schema_json);
/* Validates the report against the shipped schema, then summarizes it. */
sb_status sb_report_summary(const char* report_json, char** summary);

#ifdef __cplusplus
}
#endif

#endif /* SPECTRAL_BOUNDS_H */
