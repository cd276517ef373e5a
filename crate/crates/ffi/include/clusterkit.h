#ifndef CLUSTERKIT_H
#define CLUSTERKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. `CK_OK` is zero; everything else is an error.
 */
typedef enum ck_status {
  CK_OK = 0,
  CK_NULL_POINTER = 1,
  CK_INVALID_UTF8 = 2,
  CK_PARSE = 3,
  CK_PARAMETER = 4,
  CK_BUDGET = 5,
  CK_INTERNAL = 6,
} ck_status;

/*
 Search mode for `ck_find_cluster`.
 */
typedef enum ck_find_mode {
  CK_FIND_EXHAUSTIVE = 0,
  CK_FIND_SIMPLEX_ONLY = 1,
  CK_FIND_SIMPLEX_CLUSTER_ONLY = 2,
} ck_find_mode;

/*
 Opaque handle to a uniform set family.
 */
typedef struct ck_family ck_family;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failing call on this thread, or "" after a success.
 The pointer stays valid until the next clusterkit call on this thread.
 */
const char *ck_last_error(void);

/*
 Build a named family. `construction_json` is an object such as
 `{"kind":"star","center":1}`, `{"kind":"frankl_furedi"}`,
 `{"kind":"odd_bipartite"}`, `{"kind":"lex","rank":5}` or
 `{"kind":"random","size":10,"seed":7}`.

 # Safety
 `construction_json` must be a NUL-terminated string and `out` a valid
 pointer. The handle written to `out` must be released with `ck_family_free`.
 */
enum ck_status ck_family_construct(const char *construction_json,
                                   uint32_t n,
                                   uint32_t k,
                                   struct ck_family **out);

/*
 Parse a family from its text or JSON form.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ck_status ck_family_parse(const char *text, struct ck_family **out);

/*
 Release a family handle. Null is ignored.

 # Safety
 `f` must come from this library and must not be used afterwards.
 */
void ck_family_free(struct ck_family *f);

/*
 Number of members, or 0 for a null handle.

 # Safety
 `f` must be null or a live handle.
 */
size_t ck_family_size(const struct ck_family *f);

/*
 Ambient `n` and uniformity `k`.

 # Safety
 `f` must be a live handle; `n` and `k` valid pointers.
 */
enum ck_status ck_family_params(const struct ck_family *f, uint32_t *n, uint32_t *k);

/*
 Text serialisation of the family. Free the result with `ck_string_free`.

 # Safety
 `f` must be a live handle and `out` a valid pointer.
 */
enum ck_status ck_family_to_text(const struct ck_family *f, char **out);

/*
 Uniform measure `|F| / C(|X|, k)` as an exact `"a/b"` string.

 # Safety
 `f` must be a live handle and `out` a valid pointer.
 */
enum ck_status ck_family_measure(const struct ck_family *f, char **out);

/*
 Look for a `(d,k,s)`-cluster. `mode` is a `ck_find_mode` value.
 `*found` tells whether one exists; when it does, `*witness_json` receives
 the witness document, otherwise null.

 # Safety
 `f` must be a live handle; `found` and `witness_json` valid pointers.
 */
enum ck_status ck_find_cluster(const struct ck_family *f,
                               uint32_t d,
                               uint32_t s,
                               uint32_t mode,
                               bool *found,
                               char **witness_json);

/*
 Run the extremal solver. `instance_json` holds at least
 `{"d":..,"k":..,"s":..,"n":..,"mode":"exact"|"verify_star"|"greedy"}`;
 `budget`, `seed`, `restarts`, `check_uniqueness` (default false) and
 `relabel` are optional.
 The result document is written to `*result_json`.

 # Safety
 `instance_json` must be a NUL-terminated string and `result_json` a valid pointer.
 */
enum ck_status ck_solve(const char *instance_json, char **result_json);

/*
 Release a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and must not be used afterwards.
 */
void ck_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLUSTERKIT_H */
