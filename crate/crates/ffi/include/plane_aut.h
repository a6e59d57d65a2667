#ifndef PLANE_AUT_H
#define PLANE_AUT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PaStatus {
  PA_STATUS_OK = 0,
  PA_STATUS_NULL_POINTER = 1,
  PA_STATUS_INVALID_UTF8 = 2,
  PA_STATUS_PARSE = 3,
  PA_STATUS_DOMAIN = 4,
  PA_STATUS_FIELD = 5,
  PA_STATUS_BUDGET = 6,
  PA_STATUS_NOT_INVARIANT = 7,
  PA_STATUS_INDEX_OUT_OF_RANGE = 8,
  PA_STATUS_PANIC = 9,
} PaStatus;

// A plane curve over a `PaField`.
typedef struct PaCurve PaCurve;

// Prime field F_p.
typedef struct PaField PaField;

// A rendered table of cyclic types.
typedef struct PaTable PaTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t pa_last_error(char *buf, size_t len);

// # Safety
// `s` must be null or a string returned by this library.
void pa_string_free(char *s);

// # Safety
// `out` must be a valid pointer.
enum PaStatus pa_field_new(uint64_t p, struct PaField **out);

// # Safety
// `f` must be null or a handle from `pa_field_new`, not yet freed.
void pa_field_free(struct PaField *f);

// Parses a curve in the command-line curve syntax over `field`. `beta=random`
// draws up to `trials` members from `seed`.
//
// # Safety
// `field` must be a live handle, `spec` a NUL-terminated string, `out` valid.
enum PaStatus pa_curve_parse(const struct PaField *field,
                             const char *spec,
                             uint64_t seed,
                             uint64_t trials,
                             struct PaCurve **out);

// # Safety
// `c` must be null or a handle from `pa_curve_parse`, not yet freed.
void pa_curve_free(struct PaCurve *c);

// The curve as text; free with `pa_string_free`. Null on bad input.
//
// # Safety
// `c` must be null or a live handle.
char *pa_curve_to_string(const struct PaCurve *c);

// # Safety
// `c` must be a live handle and `out` valid.
enum PaStatus pa_curve_is_smooth(const struct PaCurve *c, bool *out);

// Order of the group of monomial maps fixing the curve.
//
// # Safety
// `c` must be a live handle and `out` valid.
enum PaStatus pa_curve_stabilizer_order(const struct PaCurve *c, uint64_t *out);

// Genus of the quotient of the curve by the cyclic group generated by `map`
// (same syntax as the command line, e.g. `"8:0,1,4"`).
//
// # Safety
// `c` must be a live handle, `map` a NUL-terminated string, `out` valid.
enum PaStatus pa_curve_quotient_genus(const struct PaCurve *c, const char *map, uint64_t *out);

// Table of cyclic types of degree `d`.
//
// # Safety
// `out` must be valid.
enum PaStatus pa_table_new(uint32_t d, bool filtered, bool complete, struct PaTable **out);

// # Safety
// `t` must be null or a handle from `pa_table_new`, not yet freed.
void pa_table_free(struct PaTable *t);

// # Safety
// `t` must be null or a live handle.
size_t pa_table_len(const struct PaTable *t);

// Order m and exponents (a, b) of row `i`.
//
// # Safety
// `t` must be a live handle; `m`, `a`, `b` valid.
enum PaStatus pa_table_row(const struct PaTable *t,
                           size_t i,
                           uint64_t *m,
                           uint64_t *a,
                           uint64_t *b);

// The table as JSON; free with `pa_string_free`. Null on bad input.
//
// # Safety
// `t` must be null or a live handle.
char *pa_table_json(const struct PaTable *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLANE_AUT_H */
