#ifndef CHIRAL_CP_H
#define CHIRAL_CP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes of the C interface.
typedef enum CcpStatus {
  CCP_STATUS_OK = 0,
  CCP_STATUS_DOMAIN = 1,
  CCP_STATUS_VALIDATION = 2,
  CCP_STATUS_LIGHT_CONE = 3,
  CCP_STATUS_CONVERGENCE = 4,
  CCP_STATUS_IO = 5,
  CCP_STATUS_PARSE = 6,
  CCP_STATUS_NULL_POINTER = 7,
  CCP_STATUS_PANIC = 8,
} CcpStatus;

// Regime tag of a force value.
typedef enum CcpRegime {
  CCP_REGIME_STATIC = 0,
  CCP_REGIME_PRE_LIGHTCONE = 1,
  CCP_REGIME_POST_LIGHTCONE = 2,
  CCP_REGIME_LIMIT_NONRETARDED = 3,
  CCP_REGIME_LIMIT_RETARDED = 4,
} CcpRegime;

// Opaque molecule handle.
typedef struct CcpMolecule CcpMolecule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Build a molecule from `n` parallel arrays of transition data (SI units).
// `gamma` may be null for non-absorbing transitions.
//
// # Safety
// `label` must be a NUL-terminated string; each non-null array must hold
// `n` doubles; `out` must be valid for writing.
enum CcpStatus ccp_molecule_new(const char *label,
                                const double *omega,
                                const double *dipole_sq,
                                const double *rotatory,
                                const double *gamma,
                                size_t n,
                                struct CcpMolecule **out);

// The built-in dimethyl disulphide molecule.
//
// # Safety
// `out` must be valid for writing.
enum CcpStatus ccp_molecule_dimethyl_disulphide(struct CcpMolecule **out);

// Load a molecule from a JSON file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be valid for writing.
enum CcpStatus ccp_molecule_load(const char *path, struct CcpMolecule **out);

// A new handle holding the mirror image of `m`.
//
// # Safety
// `m` must be a live handle; `out` must be valid for writing.
enum CcpStatus ccp_molecule_enantiomer(const struct CcpMolecule *m, struct CcpMolecule **out);

// Number of transitions, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
size_t ccp_molecule_len(const struct CcpMolecule *m);

// Release a handle. Null is ignored.
//
// # Safety
// `m` must be null or a handle not yet freed.
void ccp_molecule_free(struct CcpMolecule *m);

// Static chiral force (N, positive = repulsive) at distance `d` (m).
// `chirality` is +1 or -1. `regime` may be null.
//
// # Safety
// `m` must be a live handle; `value` and non-null `regime` must be writable.
enum CcpStatus ccp_static_force(const struct CcpMolecule *m,
                                double d,
                                int chirality,
                                double *value,
                                enum CcpRegime *regime);

// Dynamical chiral force at distance `d` (m) and time `t` (s) after
// switch-on. Returns `CCP_STATUS_LIGHT_CONE` inside the guard band.
// `regime` and `lightcone_distance` may be null.
//
// # Safety
// `m` must be a live handle; all non-null out-pointers must be writable.
enum CcpStatus ccp_dynamic_force(const struct CcpMolecule *m,
                                 double d,
                                 double t,
                                 int chirality,
                                 double *value,
                                 enum CcpRegime *regime,
                                 double *lightcone_distance);

// Non-retarded (short-distance) limit of the static force.
//
// # Safety
// `m` must be a live handle; `value` must be writable.
enum CcpStatus ccp_nonretarded_limit(const struct CcpMolecule *m,
                                     double d,
                                     int chirality,
                                     double *value);

// Retarded (long-distance) limit of the static force.
//
// # Safety
// `m` must be a live handle; `value` must be writable.
enum CcpStatus ccp_retarded_limit(const struct CcpMolecule *m,
                                  double d,
                                  int chirality,
                                  double *value);

// Chiral dynamical force by frequency quadrature over the perfect-plate
// trace, with default quadrature settings. `error` may be null.
//
// # Safety
// `m` must be a live handle; `value` and non-null `error` must be writable.
enum CcpStatus ccp_quadrature_chiral_force(const struct CcpMolecule *m,
                                           double d,
                                           double t,
                                           double temperature,
                                           int chirality,
                                           double *value,
                                           double *error);

// Sine integral `Si(x)`.
//
// # Safety
// `value` must be writable.
enum CcpStatus ccp_sin_integral(double x, double *value);

// Cosine integral `Ci(x)`, `x > 0`.
//
// # Safety
// `value` must be writable.
enum CcpStatus ccp_cos_integral(double x, double *value);

// Message of the last failure on this thread as a newly allocated string
// (release with [`ccp_string_free`]), or null if none occurred.
char *ccp_last_error_message(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from [`ccp_last_error_message`] not yet freed.
void ccp_string_free(char *s);

// Library version as a static NUL-terminated string.
const char *ccp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHIRAL_CP_H */
