/* C ABI of the tpdrive frequency-estimation toolkit.
 *
 * Maintained in lockstep with crates/ffi/src/lib.rs; the Rust test suite
 * exercises every entry point through this ABI.
 *
 * Conventions: every fallible call returns a TpdStatus; outputs are
 * written through caller-provided pointers only on TPD_OK; all pointers
 * must be non-null and properly aligned; a handle is freed exactly once.
 */

#ifndef TPDRIVE_H
#define TPDRIVE_H

#include <stdbool.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every fallible call. */
typedef enum TpdStatus {
  /* Success; outputs are valid. */
  TPD_OK = 0,
  /* A required pointer was null. */
  TPD_NULL_POINTER = 1,
  /* Arguments violate a documented precondition. */
  TPD_INVALID_ARGUMENT = 2,
  /* The evaluation failed (diverging integrals, resonant poles,
   * ill-conditioned derivatives). */
  TPD_EVALUATION_FAILED = 3,
} TpdStatus;

/* Opaque handle around the validated parameter triple
 * (omega, lambda, gamma). */
typedef struct TpdParams TpdParams;

/* Detector selectors for tpd_delta_omega_full. */
#define TPD_DETECTOR_PHOTON 0
#define TPD_DETECTOR_HOMODYNE 1

/* Create a parameter handle; omega >= 0, lambda >= 0, gamma > 0. */
TpdStatus tpd_params_new(double omega, double lambda, double gamma,
                         TpdParams **out);

/* Release a handle created by tpd_params_new. Null is a no-op. */
void tpd_params_free(TpdParams *params);

/* Drive-regime classification. regime receives 0 (small), 1 (critical) or
 * 2 (large); exceptional receives the lambda = omega flag. */
TpdStatus tpd_classify_regime(const TpdParams *params, double eps_regime,
                              int32_t *regime, bool *exceptional);

/* Mode coefficients at time t; out receives [Re G, Im G, Re L, Im L]. */
TpdStatus tpd_mode_coefficients(const TpdParams *params, double t,
                                double *out);

/* Stationary spectral sums of the small-magnitude regime; out receives
 * [sum_mu2, sum_nu2, Re cross, Im cross]. Fails outside the small regime,
 * where the sums diverge. */
TpdStatus tpd_spectral_sums(const TpdParams *params, double *out);

/* Eigenvalue pair of the effective PT-symmetric generator; out receives
 * [Re e+, Im e+, Re e-, Im e-]; exceptional the coalescence flag. */
TpdStatus tpd_pt_eigenvalues(const TpdParams *params, double *out,
                             bool *exceptional);

/* Full-pipeline squared frequency uncertainty by error propagation.
 *
 * detector is TPD_DETECTOR_PHOTON or TPD_DETECTOR_HOMODYNE (theta is the
 * local-oscillator angle); alpha_sq is the input photon number (0 selects
 * vacuum); bath_modes sizes the discretization; band_width <= 0 selects
 * the default 80 max(gamma, lambda, omega); fd_step <= 0 selects the
 * default relative step. The result may be +inf when the signal carries
 * no frequency information. */
TpdStatus tpd_delta_omega_full(const TpdParams *params, double alpha_sq,
                               int32_t detector, double theta, double t,
                               uint32_t bath_modes, double band_width,
                               double fd_step, double *out);

/* Version of the underlying toolkit as a static NUL-terminated string. */
const char *tpd_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TPDRIVE_H */
