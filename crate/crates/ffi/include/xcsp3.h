#ifndef XCSP3_H
#define XCSP3_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes shared by all functions.
 */
typedef enum Xcsp3Error {
  XCSP3_OK = 0,
  XCSP3_ERR_NULL = 1,
  XCSP3_ERR_UTF8 = 2,
  XCSP3_ERR_PARSE = 3,
  XCSP3_ERR_SOLUTION = 4,
  XCSP3_ERR_SOLVE = 5,
  XCSP3_ERR_PANIC = 6,
} Xcsp3Error;

/*
 Outcome of a solution check.
 */
typedef enum Xcsp3Verdict {
  XCSP3_SATISFIED = 0,
  XCSP3_VIOLATED = 1,
  XCSP3_INCOMPLETE = 2,
  XCSP3_COST_MISMATCH = 3,
} Xcsp3Verdict;

/*
 Outcome of a search.
 */
typedef enum Xcsp3Status {
  XCSP3_SAT = 0,
  XCSP3_UNSAT = 1,
  XCSP3_OPTIMUM = 2,
  XCSP3_LIMIT = 3,
} Xcsp3Status;

/*
 A parsed, normalized instance.
 */
typedef struct Xcsp3Instance Xcsp3Instance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses an XML document. `strict` != 0 rejects unknown elements.
 On success `*out` receives a handle to release with `xcsp3_instance_free`.

 # Safety
 `xml` must be a NUL-terminated string and `out` a valid pointer.
 */
enum Xcsp3Error xcsp3_instance_parse(const char *xml, int32_t strict, struct Xcsp3Instance **out);

/*
 Releases a handle. Null is ignored.

 # Safety
 `inst` must come from `xcsp3_instance_parse` and not be freed twice.
 */
void xcsp3_instance_free(struct Xcsp3Instance *inst);

/*
 Number of declared variables, array cells included.

 # Safety
 `inst` must be a live handle or null.
 */
size_t xcsp3_instance_variable_count(const struct Xcsp3Instance *inst);

/*
 Number of constraints after group and slide expansion.

 # Safety
 `inst` must be a live handle or null.
 */
size_t xcsp3_instance_constraint_count(const struct Xcsp3Instance *inst);

/*
 Writes the canonical flat XML of the instance into `*out`.

 # Safety
 `inst` must be a live handle and `out` a valid pointer. The string is
 released with `xcsp3_string_free`.
 */
enum Xcsp3Error xcsp3_instance_canonical(const struct Xcsp3Instance *inst, char **out);

/*
 Checks an `instantiation` document against the instance.

 # Safety
 `inst` must be a live handle, `solution_xml` a NUL-terminated string and
 `verdict` a valid pointer.
 */
enum Xcsp3Error xcsp3_check_solution(const struct Xcsp3Instance *inst,
                                     const char *solution_xml,
                                     enum Xcsp3Verdict *verdict);

/*
 Counts solutions. A `node_limit` of 0 means unlimited; when the limit is
 hit `*status` is `XCSP3_LIMIT` and `*count` is a lower bound.

 # Safety
 `inst` must be a live handle; `count` and `status` valid pointers.
 */
enum Xcsp3Error xcsp3_count_solutions(const struct Xcsp3Instance *inst,
                                      uint64_t node_limit,
                                      uint64_t *count,
                                      enum Xcsp3Status *status);

/*
 Finds one solution, or an optimum for COP instances. When one exists,
 `*solution_xml` receives its `instantiation` element, otherwise null.

 # Safety
 `inst` must be a live handle; `status` and `solution_xml` valid pointers.
 */
enum Xcsp3Error xcsp3_solve(const struct Xcsp3Instance *inst,
                            uint64_t node_limit,
                            enum Xcsp3Status *status,
                            char **solution_xml);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void xcsp3_string_free(char *s);

/*
 Message of the last failure on this thread, or null. The pointer stays
 valid until the next call into the library from the same thread.
 */
const char *xcsp3_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XCSP3_H */
