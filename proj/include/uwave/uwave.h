/* uwave: wavelets, pseudodifferential operators and Cauchy problems on finite
 * ultrametric ball trees.
 *
 * Every function returns a uwave_status. On failure the message for the
 * calling thread is available from uwave_last_error() until the next call.
 * Strings returned through char** are owned by the caller and must be
 * released with uwave_string_free(). Handles are immutable once built except
 * through the explicit setters, and may be shared between threads for
 * reading.
 *
 * Sources: wherever a `source` string is taken it is either a file path, a
 * shorthand ("padic(p,depth)" for spaces, "homog(beta=B[,c=R][,ci=I][,tail=1])"
 * for symbols), or, for the *_from_json variants, JSON text whose relative
 * file references resolve against `base_dir` (NULL for the working directory).
 */
#ifndef UWAVE_UWAVE_H
#define UWAVE_UWAVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define UWAVE_API __declspec(dllexport)
#else
#define UWAVE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uwave_status {
  UWAVE_OK = 0,
  UWAVE_E_PARAMETER = 1,     /* invalid tree, symbol or argument */
  UWAVE_E_PARSE = 2,         /* malformed input document */
  UWAVE_E_IDENTITY = 3,      /* ball id from another tree */
  UWAVE_E_DOMAIN = 4,        /* index or argument outside the operation's domain */
  UWAVE_E_DEGENERATE = 5,    /* ball with fewer than two positive-measure subballs */
  UWAVE_E_ANCHOR = 6,        /* anchor ball of measure zero */
  UWAVE_E_UNSUPPORTED_TAIL = 7,
  UWAVE_E_DIVERGENT = 8,     /* eigenvalue tail does not converge */
  UWAVE_E_UNSOLVABLE = 9,    /* rhs nonzero where the eigenvalue vanishes */
  UWAVE_E_ILL_CONDITIONED = 10, /* rhs nonzero where the eigenvalue is below tolerance */
  UWAVE_E_IO = 11,
  UWAVE_E_INTERNAL = 12
} uwave_status;

UWAVE_API const char* uwave_status_name(uwave_status status);
UWAVE_API const char* uwave_last_error(void);
UWAVE_API void uwave_string_free(char* s);

/* Spaces (finite measured ball trees). */
typedef struct uwave_space uwave_space;

UWAVE_API uwave_status uwave_space_load(const char* source, uwave_space** out);
UWAVE_API uwave_status uwave_space_from_json(const char* json, const char* base_dir,
                                             uwave_space** out);
UWAVE_API void uwave_space_free(uwave_space* space);

UWAVE_API uwave_status uwave_space_counts(const uwave_space* space, size_t* vertices,
                                          size_t* leaves);
UWAVE_API uwave_status uwave_space_sup(const uwave_space* space, uint32_t a, uint32_t b,
                                       uint32_t* out);
UWAVE_API uwave_status uwave_space_measure(const uwave_space* space, uint32_t ball,
                                           double* out);
/* Measure/structure summary as JSON. With members != NULL also checks that
 * the listed balls form a regular subtree and lists the violations. */
UWAVE_API uwave_status uwave_space_report(const uwave_space* space, const uint32_t* members,
                                          size_t member_count, char** json_out);
/* [{"ball":b,"j":j,"values":[[re,im],...]}, ...] in (ball, j) order. */
UWAVE_API uwave_status uwave_space_wavelets(const uwave_space* space, char** json_out);
UWAVE_API uwave_status uwave_space_to_json(const uwave_space* space, char** json_out);

/* Symbols of ultrametric pseudodifferential operators. */
typedef struct uwave_symbol uwave_symbol;

UWAVE_API uwave_status uwave_symbol_load(const char* source, uwave_symbol** out);
UWAVE_API uwave_status uwave_symbol_from_json(const char* json, const char* base_dir,
                                              uwave_symbol** out);
UWAVE_API void uwave_symbol_free(uwave_symbol* symbol);

/* Uses the tail preference stored with the symbol. */
UWAVE_API uwave_status uwave_eigenvalue(const uwave_space* space, const uwave_symbol* symbol,
                                        uint32_t ball, double* re, double* im);
/* [{"ball":b,"re":..,"im":..}, ...] over the non-leaf balls in id order. */
UWAVE_API uwave_status uwave_spectrum(const uwave_space* space, const uwave_symbol* symbol,
                                      char** json_out);

/* Polynomials in one-dimensional operators acting on separate variables.
 * default_space (may be NULL) backs factors that name no space. */
typedef struct uwave_operator uwave_operator;

UWAVE_API uwave_status uwave_operator_load(const char* source, const uwave_space* default_space,
                                           uwave_operator** out);
UWAVE_API uwave_status uwave_operator_from_json(const char* json, const char* base_dir,
                                                const uwave_space* default_space,
                                                uwave_operator** out);
UWAVE_API void uwave_operator_free(uwave_operator* op);
UWAVE_API uwave_status uwave_operator_arity(const uwave_operator* op, size_t* out);
/* Eigenvalue at a generic product vertex of `arity` ball ids. */
UWAVE_API uwave_status uwave_operator_eigenvalue(const uwave_operator* op,
                                                 const uint32_t* vertex, size_t arity,
                                                 double* re, double* im);
/* Characteristic vertices, lexicographic:
 * [{"vertex":[..],"re":..,"im":..,"abs":..,"scale":..}, ...]. */
UWAVE_API uwave_status uwave_operator_characteristics(const uwave_operator* op, double epsilon,
                                                      char** json_out);

/* Cauchy problems and their solutions. */
typedef struct uwave_problem uwave_problem;
typedef struct uwave_solution uwave_solution;

UWAVE_API uwave_status uwave_problem_load(const char* source, const uwave_space* default_space,
                                          uwave_problem** out);
UWAVE_API uwave_status uwave_problem_from_json(const char* json, const char* base_dir,
                                               const uwave_space* default_space,
                                               uwave_problem** out);
UWAVE_API void uwave_problem_free(uwave_problem* problem);
UWAVE_API uwave_status uwave_problem_set_epsilon(uwave_problem* problem, double epsilon);
/* Switches the free parameters to seeded random values. */
UWAVE_API uwave_status uwave_problem_set_seed(uwave_problem* problem, uint64_t seed);
/* {"ok":bool,"violations":[{"vertex":[..],"j":[..],"rhs":[re,im],"lambda":[re,im],
 * "exact":bool}, ...]} */
UWAVE_API uwave_status uwave_problem_check(const uwave_problem* problem, char** json_out);

/* Returns UWAVE_E_UNSOLVABLE or UWAVE_E_ILL_CONDITIONED when the necessary
 * conditions fail; uwave_problem_check() lists the offending indices. */
UWAVE_API uwave_status uwave_solve(const uwave_problem* problem, uwave_solution** out);
UWAVE_API uwave_status uwave_solution_load(const char* source, uwave_solution** out);
UWAVE_API uwave_status uwave_solution_from_json(const char* json, const char* base_dir,
                                                uwave_solution** out);
UWAVE_API void uwave_solution_free(uwave_solution* solution);
UWAVE_API uwave_status uwave_solution_to_json(const uwave_solution* solution, char** json_out);
UWAVE_API uwave_status uwave_solution_arity(const uwave_solution* solution, size_t* out);
/* u(chi_J) for the product ball J given by `arity` ball ids. */
UWAVE_API uwave_status uwave_solution_eval(const uwave_solution* solution,
                                           const uint32_t* vertex, size_t arity, double* re,
                                           double* im);
/* u(chi_J) for every product vertex, lexicographic:
 * [{"vertex":[..],"re":..,"im":..}, ...]. */
UWAVE_API uwave_status uwave_solution_eval_all(const uwave_solution* solution, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* UWAVE_UWAVE_H */
