#ifndef DECOLAB_H
#define DECOLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum DlStatus {
  DL_STATUS_OK = 0,
  DL_STATUS_NULL_POINTER = 1,
  DL_STATUS_INVALID_ARGUMENT = 2,
  DL_STATUS_INVALID_GRID = 3,
  DL_STATUS_BOUNDARY_LEAK = 4,
  DL_STATUS_STABILITY_VIOLATION = 5,
  DL_STATUS_NUMERICAL = 6,
  DL_STATUS_BUFFER_TOO_SMALL = 7,
  DL_STATUS_PANIC = 8,
} DlStatus;

// Density matrix on a spatial grid.
typedef struct DlDensityMatrix DlDensityMatrix;

// Wigner function sampled on an (x, p) grid.
typedef struct DlWignerFunction DlWignerFunction;

typedef struct DlDiagnostics {
  double trace;
  double purity;
  double hermiticity_residue;
  double boundary_ratio;
} DlDiagnostics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *dl_version(void);

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length without the NUL, or
// 0 when the last call succeeded.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t dl_last_error(char *buf, size_t len);

// Pure Gaussian packet `|ψ⟩⟨ψ|` on `n` points spanning `[x_min, x_max]`.
//
// # Safety
// `out` must be valid for writes.
enum DlStatus dl_density_gaussian(size_t n,
                                  double x_min,
                                  double x_max,
                                  double center,
                                  double width,
                                  double momentum,
                                  struct DlDensityMatrix **out);

// Even superposition of two packets at `±separation/2`.
//
// # Safety
// `out` must be valid for writes.
enum DlStatus dl_density_cat(size_t n,
                             double x_min,
                             double x_max,
                             double separation,
                             double width,
                             struct DlDensityMatrix **out);

// Releases a density matrix. Null is ignored.
//
// # Safety
// `rho` must come from this library and not be used afterwards.
void dl_density_free(struct DlDensityMatrix *rho);

// Number of grid points, or 0 for null.
//
// # Safety
// `rho` must be null or a live handle.
size_t dl_density_dim(const struct DlDensityMatrix *rho);

// Trace, purity, Hermiticity residue and boundary ratio.
//
// # Safety
// `rho` must be a live handle and `out` valid for writes.
enum DlStatus dl_density_diagnostics(const struct DlDensityMatrix *rho, struct DlDiagnostics *out);

// Coherence length of the off-diagonal profile.
//
// # Safety
// `rho` must be a live handle and `out` valid for writes.
enum DlStatus dl_density_coherence_length(const struct DlDensityMatrix *rho, double *out);

// Copies the elements in row-major order into `re` and `im`, each of
// length `len ≥ dim²`.
//
// # Safety
// `re` and `im` must be valid for `len` writes.
enum DlStatus dl_density_elements(const struct DlDensityMatrix *rho,
                                  double *re,
                                  double *im,
                                  size_t len);

// Multiplies the off-diagonal elements by `exp(-Λt(x-x')²)` in place.
//
// # Safety
// `rho` must be a live handle.
enum DlStatus dl_density_localize(struct DlDensityMatrix *rho, double lambda, double t);

// `steps` steps of the free decoherence equation in place. Stops with
// `DL_STATUS_BOUNDARY_LEAK` once the packet reaches the grid edge.
//
// # Safety
// `rho` must be a live handle.
enum DlStatus dl_density_evolve_free(struct DlDensityMatrix *rho,
                                     double mass,
                                     double lambda,
                                     double dt,
                                     size_t steps,
                                     bool rk4);

// `steps` steps of the Caldeira–Leggett equation in place, with the same
// edge check as [`dl_density_evolve_free`].
//
// # Safety
// `rho` must be a live handle.
enum DlStatus dl_density_evolve_cl(struct DlDensityMatrix *rho,
                                   double mass,
                                   double gamma,
                                   double temperature,
                                   double dt,
                                   size_t steps,
                                   bool rk4);

// Wigner transform of a density matrix.
//
// # Safety
// `rho` must be a live handle and `out` valid for writes.
enum DlStatus dl_wigner_transform(const struct DlDensityMatrix *rho, struct DlWignerFunction **out);

// Releases a Wigner function. Null is ignored.
//
// # Safety
// `w` must come from this library and not be used afterwards.
void dl_wigner_free(struct DlWignerFunction *w);

// Number of x and p samples.
//
// # Safety
// `w` must be a live handle; `nx`, `np` valid for writes.
enum DlStatus dl_wigner_shape(const struct DlWignerFunction *w, size_t *nx, size_t *np);

// Copies `W(x_i, p_j)` to `buf[i * np + j]`, and the axes to `x` (length
// nx) and `p` (length np) when they are not null.
//
// # Safety
// `buf` must be valid for `len` writes; `x`, `p` null or large enough.
enum DlStatus dl_wigner_values(const struct DlWignerFunction *w,
                               double *buf,
                               size_t len,
                               double *x,
                               double *p);

// `∫∫ W dx dp`.
//
// # Safety
// `w` must be a live handle and `out` valid for writes.
enum DlStatus dl_wigner_normalisation(const struct DlWignerFunction *w, double *out);

// `Λ = k² · flux · σ_eff`.
//
// # Safety
// `out` must be valid for writes.
enum DlStatus dl_localization_rate(double wave_number, double flux, double sigma_eff, double *out);

// Gravitational decoherence rate and resolvable `Δg/g` for a gas (CGS).
//
// # Safety
// `rate` and `dg_over_g` must be valid for writes.
enum DlStatus dl_gravity(double density,
                         double particle_mass,
                         double temperature,
                         double box_size,
                         double time,
                         double g_ref,
                         double *rate,
                         double *dg_over_g);

// Two-level survival `P(t)` and `P_N(t)` with coupling `v`.
//
// # Safety
// `p` and `p_n` must be valid for writes.
enum DlStatus dl_zeno_two_level(double v, double t, uint32_t n, double *p, double *p_n);

// Left-handed population at `t` starting from the left state.
//
// # Safety
// `out` must be valid for writes.
enum DlStatus dl_chiral_left_population(double delta, double lambda, double t, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DECOLAB_H */
