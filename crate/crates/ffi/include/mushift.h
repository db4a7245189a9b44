/* C ABI for the mushift surface magnetic-moment shift library. */

#ifndef MUSHIFT_H
#define MUSHIFT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * How a shift value was obtained.
 */
typedef enum MushiftMethod {
  MUSHIFT_METHOD_CLOSED_FORM = 0,
  MUSHIFT_METHOD_QUADRATURE = 1,
  MUSHIFT_METHOD_ASYMPTOTIC = 2,
} MushiftMethod;

/**
 * External magnetic-field direction relative to the surface.
 */
typedef enum MushiftOrientation {
  MUSHIFT_ORIENTATION_PERPENDICULAR = 0,
  MUSHIFT_ORIENTATION_PARALLEL = 1,
} MushiftOrientation;

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum MushiftStatus {
  MUSHIFT_STATUS_OK = 0,
  MUSHIFT_STATUS_NULL_POINTER = 1,
  MUSHIFT_STATUS_INVALID_ARGUMENT = 2,
  MUSHIFT_STATUS_UNSUPPORTED_MODEL = 3,
  MUSHIFT_STATUS_NON_CONVERGENCE = 4,
  MUSHIFT_STATUS_INTERNAL_ERROR = 5,
} MushiftStatus;

/**
 * Opaque quadrature configuration handle.
 */
typedef struct MushiftConfig MushiftConfig;

/**
 * A scaled shift `s = delta_mu / delta_mu_pm_perp(d)` with its error
 * estimate and the TE/TM/surface-mode decomposition where available
 * (the `has_*` flags mark which components are populated).
 */
typedef struct MushiftShift {
  double s_hat;
  double est_err;
  enum MushiftMethod method;
  uint8_t has_te;
  uint8_t has_tm;
  uint8_t has_sp;
  double te;
  double tm;
  double sp;
} MushiftShift;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a quadrature configuration with the library defaults
 * (rel_tol 1e-9, abs_tol 1e-14, 2000 subdivisions, tail cut 46).
 * Free with `mushift_config_free`.
 */
struct MushiftConfig *mushift_config_new(void);

/**
 * Releases a configuration handle. Passing null is a no-op.
 *
 * # Safety
 * `cfg` must have come from `mushift_config_new` and not be freed twice.
 */
void mushift_config_free(struct MushiftConfig *cfg);

/**
 * Sets the relative tolerance; rejects values that violate the
 * configuration invariants.
 *
 * # Safety
 * `cfg` must be a live handle from `mushift_config_new`.
 */
enum MushiftStatus mushift_config_set_rel_tol(struct MushiftConfig *cfg, double value);

/**
 * Sets the absolute tolerance floor.
 *
 * # Safety
 * `cfg` must be a live handle from `mushift_config_new`.
 */
enum MushiftStatus mushift_config_set_abs_tol(struct MushiftConfig *cfg, double value);

/**
 * Sets the panel-subdivision limit (at least 10).
 *
 * # Safety
 * `cfg` must be a live handle from `mushift_config_new`.
 */
enum MushiftStatus mushift_config_set_max_subdivisions(struct MushiftConfig *cfg, uint32_t value);

/**
 * Sets the exponential tail-truncation threshold (at least 30).
 *
 * # Safety
 * `cfg` must be a live handle from `mushift_config_new`.
 */
enum MushiftStatus mushift_config_set_tail_cut(struct MushiftConfig *cfg, double value);

/**
 * Perfect-reflector shift: exactly +1 (perpendicular) or -1 (parallel).
 *
 * # Safety
 * `out` must point to writable memory for one `MushiftShift`.
 */
enum MushiftStatus mushift_pm_shift(enum MushiftOrientation orientation,
                                    double distance,
                                    struct MushiftShift *out);

/**
 * Exact nondispersive shift for refractive index `n >= 1` (distance
 * independent in scaled units).
 *
 * # Safety
 * `out` must point to writable memory for one `MushiftShift`.
 */
enum MushiftStatus mushift_nondispersive_shift(double n,
                                               enum MushiftOrientation orientation,
                                               double distance,
                                               struct MushiftShift *out);

/**
 * Full plasma shift (TE closed form plus TM quadrature) at plasma
 * frequency `omega_p` and distance `d`, both in natural units.
 *
 * # Safety
 * `out` must be writable; `cfg` null (defaults) or a live handle.
 */
enum MushiftStatus mushift_plasma_shift(double omega_p,
                                        enum MushiftOrientation orientation,
                                        double distance,
                                        const struct MushiftConfig *cfg,
                                        struct MushiftShift *out);

/**
 * General dispersive-dielectric shift via the wedge quadrature.
 *
 * # Safety
 * `out` must be writable; `cfg` null (defaults) or a live handle.
 */
enum MushiftStatus mushift_dispersive_shift(double omega_p,
                                            double omega_t,
                                            enum MushiftOrientation orientation,
                                            double distance,
                                            const struct MushiftConfig *cfg,
                                            struct MushiftShift *out);

/**
 * Surface plasmon/polariton contribution alone. Pass `omega_t = 0` for
 * the plasma model.
 *
 * # Safety
 * `out` must be writable; `cfg` null (defaults) or a live handle.
 */
enum MushiftStatus mushift_sp_only_shift(double omega_p,
                                         double omega_t,
                                         enum MushiftOrientation orientation,
                                         double distance,
                                         const struct MushiftConfig *cfg,
                                         struct MushiftShift *out);

/**
 * Leading short-distance asymptote (`omega_t = 0` selects the plasma).
 *
 * # Safety
 * `out` must point to writable memory for one `MushiftShift`.
 */
enum MushiftStatus mushift_small_distance_shift(double omega_p,
                                                double omega_t,
                                                enum MushiftOrientation orientation,
                                                double distance,
                                                struct MushiftShift *out);

/**
 * Relative shift `delta_mu / mu` against the Dirac moment for a scaled
 * shift `s_hat` at distance `z_nm` nanometers. Returns NaN for invalid
 * distances.
 */
double mushift_relative_shift(double s_hat, double z_nm);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mushift_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MUSHIFT_H */
