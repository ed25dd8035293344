#ifndef CURVATURE_CURVATURE_H
#define CURVATURE_CURVATURE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CURV_API __declspec(dllexport)
#else
#define CURV_API __attribute__((visibility("default")))
#endif

typedef enum curv_status {
  CURV_OK = 0,
  CURV_INVALID_ARGUMENT,
  CURV_PARSE,
  CURV_INDEX_RANGE,
  CURV_SYMMETRY_CONFLICT,
  CURV_INVALID_DIMENSION,
  CURV_PRECONDITION,
  CURV_COMBINATORIAL_GUARD,
  CURV_IDENTITY_VIOLATION,
  CURV_UNSUPPORTED,
  CURV_INTERNAL,
  CURV_IO
} curv_status;

typedef enum curv_field {
  CURV_FIELD_RATIONAL = 0,
  CURV_FIELD_GAUSSIAN_RATIONAL,
  CURV_FIELD_F64,
  CURV_FIELD_C64
} curv_field;

typedef struct curv_tensor curv_tensor;

typedef struct curv_options {
  double tolerance;       /* > 0 */
  uint64_t seed;
  int samples;            /* >= 1 */
  int d1, d2;             /* split; both 0 when absent */
  const char* input_hash; /* may be NULL */
} curv_options;

CURV_API const char* curv_version(void);
/* Message of the last failure on the calling thread. */
CURV_API const char* curv_last_error(void);
CURV_API const char* curv_status_name(curv_status status);
CURV_API void curv_options_init(curv_options* opts);

CURV_API curv_status curv_tensor_parse(const char* json, curv_tensor** out);
/* spec: {"kind": ..., "params": {...}, "seed": k, "field": ...} */
CURV_API curv_status curv_tensor_generate(const char* spec_json, curv_tensor** out);
/* Canonical JSON; release with curv_string_free. */
CURV_API curv_status curv_tensor_emit(const curv_tensor* t, char** out);
CURV_API void curv_tensor_free(curv_tensor* t);

CURV_API int curv_tensor_dim(const curv_tensor* t);
CURV_API curv_field curv_tensor_field(const curv_tensor* t);
CURV_API curv_status curv_tensor_convert(const curv_tensor* t, curv_field field, curv_tensor** out);
/* R - 2 (unit constant curvature). */
CURV_API curv_status curv_tensor_shift(const curv_tensor* t, curv_tensor** out);
/* *violations receives the number of violated symmetry identities. */
CURV_API curv_status curv_tensor_validate(const curv_tensor* t, double tolerance, int* violations);

/* checks_csv: comma separated subset of symmetries,einstein,two_stein,hc2,block,shift_equiv.
   *report receives one JSON line per check. */
CURV_API curv_status curv_check(const curv_tensor* t, const char* checks_csv, const curv_options* opts,
                                char** report, int* passed);
/* Runs the deduction on shift(t); *verdict is 1 for constant curvature. */
CURV_API curv_status curv_certify(const curv_tensor* t, const curv_options* opts, char** trace,
                                  int* verdict);
CURV_API curv_status curv_identities(int d1, int d2, int seeds, const curv_options* opts, char** cert,
                                     int* passed);

CURV_API uint64_t curv_fnv1a64(const char* bytes, uint64_t length);
CURV_API void curv_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
