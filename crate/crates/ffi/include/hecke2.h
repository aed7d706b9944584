#ifndef HECKE2_H
#define HECKE2_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. `Ok` is zero; each library error kind has its own code.
typedef enum Hecke2Status {
  HECKE2_STATUS_OK = 0,
  HECKE2_STATUS_NULL_POINTER = 1,
  HECKE2_STATUS_PANIC = 2,
  HECKE2_STATUS_MALFORMED_INPUT = 10,
  HECKE2_STATUS_DIVISION_IMPOSSIBLE = 11,
  HECKE2_STATUS_SHAPE_VIOLATION = 12,
  HECKE2_STATUS_NOT_IN_M_ODD = 13,
  HECKE2_STATUS_TABLE_TOO_SMALL = 14,
  HECKE2_STATUS_THEOREM_VIOLATED = 15,
  HECKE2_STATUS_NOT_APPLICABLE = 16,
  HECKE2_STATUS_LEMMA_VIOLATED = 17,
  HECKE2_STATUS_DIMENSION_VIOLATION = 18,
  HECKE2_STATUS_BAD_INDEX = 19,
  HECKE2_STATUS_NOT_IN_N2 = 20,
  HECKE2_STATUS_PROJECTION_MISMATCH = 21,
  HECKE2_STATUS_BAD_PRIME = 22,
  HECKE2_STATUS_NOT_IN_M_ODD_SPAN = 23,
  HECKE2_STATUS_AGREEMENT_FAILURE = 24,
  HECKE2_STATUS_MEMBERSHIP_FAILURE = 25,
  HECKE2_STATUS_CLOSURE_FAILURE = 26,
  HECKE2_STATUS_NO_SOLUTION = 27,
  HECKE2_STATUS_NOT_MULTIPLICATION = 28,
  HECKE2_STATUS_EQUIVARIANCE_FAILURE = 29,
  HECKE2_STATUS_CONFIG = 30,
} Hecke2Status;

// Theta series selector for [`hecke2_theta`].
typedef enum Hecke2Theta {
  HECKE2_THETA_R = 0,
  HECKE2_THETA_F = 1,
  HECKE2_THETA_G = 2,
  HECKE2_THETA_D = 3,
} Hecke2Theta;

// Kernel elements `g_n` of `t^k -> C_k`.
typedef struct Hecke2KernelBasis Hecke2KernelBasis;

// A polynomial over GF(2).
typedef struct Hecke2Poly Hecke2Poly;

// The tables `C_0..C_N`, `A_0..A_N`.
typedef struct Hecke2SequenceTable Hecke2SequenceTable;

// A truncated power series over GF(2).
typedef struct Hecke2Series Hecke2Series;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty if none.
// Copies at most `cap - 1` bytes plus a terminating NUL and returns the
// full message length.
//
// # Safety
// `buf` has room for `cap` bytes (may be null when `cap == 0`).
size_t hecke2_last_error(char *buf, size_t cap);

// Static name of a status code.
const char *hecke2_status_name(enum Hecke2Status status);

// Polynomial from a strictly ascending exponent list.
//
// # Safety
// `exps` points to `len` values; `out` is writable.
enum Hecke2Status hecke2_poly_from_exponents(const uint64_t *exps,
                                             size_t len,
                                             struct Hecke2Poly **out);

// # Safety
// `p` is null or a handle from this library, not yet freed.
void hecke2_poly_free(struct Hecke2Poly *p);

// Degree, or -1 for the zero polynomial (also -1 on a null handle).
//
// # Safety
// `p` is null or a live handle.
int64_t hecke2_poly_degree(const struct Hecke2Poly *p);

// # Safety
// `p` is a live handle; see [`write_exponents`] for `buf`, `cap`, `len`.
enum Hecke2Status hecke2_poly_exponents(const struct Hecke2Poly *p,
                                        uint64_t *buf,
                                        size_t cap,
                                        size_t *len);

// # Safety
// `a`, `b` are live handles; `out` is writable.
enum Hecke2Status hecke2_poly_add(const struct Hecke2Poly *a,
                                  const struct Hecke2Poly *b,
                                  struct Hecke2Poly **out);

// # Safety
// `a`, `b` are live handles; `out` is writable.
enum Hecke2Status hecke2_poly_mul(const struct Hecke2Poly *a,
                                  const struct Hecke2Poly *b,
                                  struct Hecke2Poly **out);

// The semi-linear operator `U` on `Z/2[r]`; the polynomial is read in `r`.
//
// # Safety
// `p` is a live handle; `out` is writable.
enum Hecke2Status hecke2_apply_u(const struct Hecke2Poly *p, struct Hecke2Poly **out);

// # Safety
// `out` is writable.
enum Hecke2Status hecke2_sequences_new(size_t bound, struct Hecke2SequenceTable **out);

// # Safety
// `t` is null or a live handle.
void hecke2_sequences_free(struct Hecke2SequenceTable *t);

// `C_n` as a new polynomial handle.
//
// # Safety
// `t` is a live handle; `out` is writable.
enum Hecke2Status hecke2_sequences_c(const struct Hecke2SequenceTable *t,
                                     size_t n,
                                     struct Hecke2Poly **out);

// Kernel basis for degrees `<= bound`; `normalized != 0` selects the
// window-normalized representatives, otherwise reduced echelon form.
//
// # Safety
// `t` is a live handle; `out` is writable.
enum Hecke2Status hecke2_kernel_basis_new(const struct Hecke2SequenceTable *t,
                                          size_t bound,
                                          int32_t normalized,
                                          struct Hecke2KernelBasis **out);

// # Safety
// `k` is null or a live handle.
void hecke2_kernel_basis_free(struct Hecke2KernelBasis *k);

// Number of stored `g_n` (0 on a null handle).
//
// # Safety
// `k` is null or a live handle.
size_t hecke2_kernel_basis_len(const struct Hecke2KernelBasis *k);

// `g_n` as a new polynomial handle; `NotApplicable` unless `n = 0, 2 (mod 6)`.
//
// # Safety
// `k` is a live handle; `out` is writable.
enum Hecke2Status hecke2_kernel_basis_get(const struct Hecke2KernelBasis *k,
                                          size_t n,
                                          struct Hecke2Poly **out);

// # Safety
// `out` is writable.
enum Hecke2Status hecke2_theta(enum Hecke2Theta kind, size_t precision, struct Hecke2Series **out);

// The series of a polynomial in `r`, to the given precision.
//
// # Safety
// `p` is a live handle; `out` is writable.
enum Hecke2Status hecke2_series_of_poly(const struct Hecke2Poly *p,
                                        size_t precision,
                                        struct Hecke2Series **out);

// # Safety
// `s` is null or a live handle.
void hecke2_series_free(struct Hecke2Series *s);

// Number of known coefficients (0 on a null handle).
//
// # Safety
// `s` is null or a live handle.
size_t hecke2_series_precision(const struct Hecke2Series *s);

// Exponents with coefficient 1 below the precision.
//
// # Safety
// `s` is a live handle; see [`hecke2_poly_exponents`] for the buffer.
enum Hecke2Status hecke2_series_exponents(const struct Hecke2Series *s,
                                          uint64_t *buf,
                                          size_t cap,
                                          size_t *len);

// `T_p`; `BadPrime` unless `p` is an odd prime other than 5.
//
// # Safety
// `s` is a live handle; `out` is writable.
enum Hecke2Status hecke2_hecke_tp(const struct Hecke2Series *s,
                                  uint64_t p,
                                  struct Hecke2Series **out);

// # Safety
// `s` is a live handle; `out` is writable.
enum Hecke2Status hecke2_u5(const struct Hecke2Series *s, struct Hecke2Series **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HECKE2_H */
