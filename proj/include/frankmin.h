#ifndef FRANKMIN_H
#define FRANKMIN_H

/* C interface to the frankmin library: one-dimensional cholesteric
 * minimizers, three-dimensional director-field relaxation, and stability
 * constants for the Oseen-Frank energy on the unit-height cuboid cell.
 *
 * All functions returning int yield FRANKMIN_OK (0) on success and a
 * nonzero error code otherwise; frankmin_error_message() describes the
 * most recent failure on the calling thread. Objects returned through
 * out-parameters are owned by the caller and released with the matching
 * _free function.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  FRANKMIN_OK = 0,
  FRANKMIN_ERR_INVALID_ARGUMENT = 1,
  FRANKMIN_ERR_SOLVER = 2,
  FRANKMIN_ERR_IO = 3,
  FRANKMIN_ERR_INTERNAL = 4
};

typedef struct frankmin_profile frankmin_profile;
typedef struct frankmin_grid frankmin_grid;
typedef struct frankmin_report frankmin_report;

const char* frankmin_version(void);
const char* frankmin_error_message(void);

/* ---- chirality and closed-form constants ---- */

int frankmin_normalize_chirality(double t_raw, double* t_abs, int* reflected);

double frankmin_angle_inequality_constant(void);
double frankmin_gamma_frustrated(double t);
double frankmin_gamma_homeotropic(double t);
double frankmin_threshold_frustrated(void);
double frankmin_threshold_homeotropic(void);
double frankmin_optimal_cauchy_eps(double t);

/* ---- one-dimensional minimizer profiles ---- */

/* Solves the one-variable minimization problem on n_nodes uniform nodes.
 * one_constant nonzero forces k1 = k2 = k3 = K (pass K in k1) and k4 = 0. */
int frankmin_solve1d(double k1, double k2, double k3, double k4,
                     int one_constant, double t, int n_nodes,
                     frankmin_profile** out);

/* Independent oracle: direct minimization of the discretized reduced
 * Lagrangian over nodal theta values. */
int frankmin_brute_force_1d(double k1, double k2, double k3, double k4,
                            int one_constant, double t, int n_nodes,
                            frankmin_profile** out);

void frankmin_profile_free(frankmin_profile* p);
int frankmin_profile_node_count(const frankmin_profile* p, int* n);
int frankmin_profile_node(const frankmin_profile* p, int i, double* z,
                          double* theta, double* phi);
int frankmin_profile_constant(const frankmin_profile* p, double* c);
int frankmin_profile_energy_per_area(const frankmin_profile* p, double* e);
int frankmin_profile_residual(const frankmin_profile* p, double* r);
int frankmin_profile_write_csv(const frankmin_profile* p, const char* path);
int frankmin_profile_write_metadata(const frankmin_profile* p,
                                    const char* path);

/* ---- three-dimensional director grids ---- */

/* bc is "frustrated" or "homeotropic". */
int frankmin_grid_base(int nx, int ny, int nz, double l1, double l2,
                       const char* bc, frankmin_grid** out);
int frankmin_grid_embed_profile(const frankmin_profile* p, int nx, int ny,
                                int nz, double l1, double l2,
                                frankmin_grid** out);
int frankmin_grid_smooth_sample(uint64_t seed, double amplitude, int nx,
                                int ny, int nz, double l1, double l2,
                                const char* bc, frankmin_grid** out);
int frankmin_grid_perturb(const frankmin_grid* g, double amplitude,
                          uint64_t seed, frankmin_grid** out);
void frankmin_grid_free(frankmin_grid* g);

int frankmin_grid_dims(const frankmin_grid* g, int* nx, int* ny, int* nz);
int frankmin_grid_node(const frankmin_grid* g, int i, int j, int k,
                       double* nx_val, double* ny_val, double* nz_val);
int frankmin_grid_energy(const frankmin_grid* g, double k1, double k2,
                         double k3, double k4, int one_constant, double t,
                         double* out);
int frankmin_grid_saddle_splay(const frankmin_grid* g, double* out);
int frankmin_grid_el_residual(const frankmin_grid* g, double t, double* out);

int frankmin_grid_save(const frankmin_grid* g, const char* path);
int frankmin_grid_load(const char* path, frankmin_grid** out);

/* Projected gradient descent from `start`. Pass max_iter <= 0,
 * grad_tol <= 0 or step_init <= 0 to use the defaults (50000, 1e-6,
 * 1e-2). Non-convergence is reported through the report object, not as
 * an error code. */
int frankmin_grid_relax(const frankmin_grid* start, double k1, double k2,
                        double k3, double k4, int one_constant, double t,
                        int max_iter, double grad_tol, double step_init,
                        frankmin_grid** out_grid, frankmin_report** out_report);

void frankmin_report_free(frankmin_report* r);
int frankmin_report_iterations(const frankmin_report* r, int* n);
int frankmin_report_converged(const frankmin_report* r, int* converged);
int frankmin_report_final_gradient_norm(const frankmin_report* r, double* g);
int frankmin_report_trace_length(const frankmin_report* r, int* n);
int frankmin_report_trace_value(const frankmin_report* r, int i, double* e);

/* ---- verification suites ---- */

/* Runs a named property suite (saddle-splay, splitting, first-integral,
 * lemma-monotone, gradient-check, angle-inequality). On success
 * *json_report holds a malloc'd JSON document (release with
 * frankmin_string_free) and *all_pass is 1 iff every case passed. */
int frankmin_verify_suite(const char* suite, char** json_report,
                          int* all_pass);
void frankmin_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* FRANKMIN_H */
