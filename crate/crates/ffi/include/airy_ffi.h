#ifndef AIRY_FFI_H
#define AIRY_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AiryStatus {
  AIRY_STATUS_OK = 0,
  AIRY_STATUS_NULL_POINTER = 1,
  AIRY_STATUS_INVALID_INPUT = 2,
  AIRY_STATUS_NOT_PRIME = 3,
  AIRY_STATUS_UNSUPPORTED = 4,
  AIRY_STATUS_PRECOND_VIOLATION = 5,
  AIRY_STATUS_TOO_LARGE = 6,
  AIRY_STATUS_VERIFICATION_FAILED = 7,
  AIRY_STATUS_INTERNAL = 8,
  AIRY_STATUS_PANIC = 9,
} AiryStatus;

// Opaque family `f(x) + t x` over `F_q`.
typedef struct AiryFamily AiryFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a family from `len = d + 1` coefficients `c_0..c_d`.
//
// With `a == 1` the values are residues mod `p`; otherwise they are element
// indices of `F_{p^a}`.
//
// # Safety
// `coeffs` must point to `len` readable values and `out` must be writable.
enum AiryStatus airy_family_new(uint64_t p,
                                uint32_t a,
                                const int64_t *coeffs,
                                uintptr_t len,
                                struct AiryFamily **out);

// # Safety
// `fam` must come from [`airy_family_new`] and not be used afterwards.
void airy_family_free(struct AiryFamily *fam);

// Predicted degree of `M_k`; negative when the L-function is `1/Q_k`.
//
// # Safety
// `fam` must be a live handle and `out` writable.
enum AiryStatus airy_predicted_degree(const struct AiryFamily *fam, uint32_t k, int64_t *out);

// Swan conductor of `Sym^k` at infinity.
//
// # Safety
// `fam` must be a live handle and `out` writable.
enum AiryStatus airy_swan(const struct AiryFamily *fam, uint32_t k, uint64_t *out);

// Local factor `Q_k` at infinity as JSON.
//
// # Safety
// `fam` must be a live handle and `out` writable. Free the result with
// [`airy_string_free`].
enum AiryStatus airy_trivial_factor_json(const struct AiryFamily *fam, uint32_t k, char **out);

// Fiber L-polynomial at the element of `F_{q^e}` with index `t`.
//
// `budget == 0` keeps the default enumeration budget.
//
// # Safety
// `fam` must be a live handle and `out` writable. Free the result with
// [`airy_string_free`].
enum AiryStatus airy_fiber_json(const struct AiryFamily *fam,
                                uint32_t e,
                                uint64_t t,
                                uint64_t budget,
                                char **out);

// `M_k` with every verification, as a JSON report.
//
// Returns [`AiryStatus::VerificationFailed`] when the report is produced but
// some check fails; `out` is still set in that case.
//
// # Safety
// `fam` must be a live handle and `out` writable. Free the result with
// [`airy_string_free`].
enum AiryStatus airy_lfunction_json(const struct AiryFamily *fam,
                                    uint32_t k,
                                    uint64_t budget,
                                    char **out);

// Newton-polygon monodromy scan over closed points of degree `<= max_e`.
//
// # Safety
// `fam` must be a live handle and `out` writable. Free the result with
// [`airy_string_free`].
enum AiryStatus airy_scan_monodromy_json(const struct AiryFamily *fam,
                                         uint32_t max_e,
                                         uint64_t budget,
                                         char **out);

// Message of the last failed call on this thread, or null.
//
// The pointer stays valid until the next call into this library on the
// same thread.
const char *airy_last_error(void);

// # Safety
// `s` must come from this library and not be freed twice.
void airy_string_free(char *s);

// Library version as a static string.
const char *airy_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AIRY_FFI_H */
