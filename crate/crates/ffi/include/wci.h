#ifndef WCI_H
#define WCI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum WciStatus {
  WCI_STATUS_OK = 0,
  WCI_STATUS_NULL_POINTER = 1,
  // Empty weights, a zero entry, or dimension too small.
  WCI_STATUS_INVALID_INPUT = 2,
  // The Fano index is not positive.
  WCI_STATUS_NOT_FANO = 3,
  // Unknown enumeration kind.
  WCI_STATUS_BAD_KIND = 4,
  // A library invariant failed or a panic was caught.
  WCI_STATUS_INTERNAL = 5,
} WciStatus;

// Opaque family handle.
typedef struct WciFamily WciFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a family from `n_weights` weights and `n_degrees` degrees. The
// lists are normalized; the handle is written to `out`.
//
// # Safety
// `weights` and `degrees` must point to that many readable values (either may
// be null when its length is 0) and `out` must be writable.
enum WciStatus wci_family_new(const uint64_t *weights,
                              size_t n_weights,
                              const uint64_t *degrees,
                              size_t n_degrees,
                              struct WciFamily **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `family` must come from [`wci_family_new`] and not be used afterwards.
void wci_family_free(struct WciFamily *family);

// Sum of weights minus sum of degrees; may be zero or negative.
//
// # Safety
// `family` must be a live handle and `out` writable.
enum WciStatus wci_family_index(const struct WciFamily *family, int64_t *out);

// Writes whether the pair is combinatorially smooth.
//
// # Safety
// `family` must be a live handle and `out` writable.
enum WciStatus wci_family_is_smooth(const struct WciFamily *family, bool *out);

// Writes `{"weights","degrees","invariants"}` as JSON. Fails with
// `NotFano` when the index is not positive.
//
// # Safety
// `family` must be a live handle and `out` writable.
enum WciStatus wci_family_invariants_json(const struct WciFamily *family, char **out);

// Generators of the given variance as a JSON array. `kind`: 0 all,
// 1 projective space, 2 series, 3 semiseries.
//
// # Safety
// `out` must be writable.
enum WciStatus wci_enumerate_json(uint64_t variance, uint32_t kind, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void wci_string_free(char *s);

// Static description of a status code; unknown codes get a fixed message.
const char *wci_status_message(int32_t status);

// Library version, static and NUL-terminated.
const char *wci_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WCI_H */
