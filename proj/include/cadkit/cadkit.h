#ifndef CADKIT_H
#define CADKIT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(CADKIT_BUILDING)
#define CADKIT_API __attribute__((visibility("default")))
#else
#define CADKIT_API
#endif

typedef enum {
  CADKIT_OK = 0,
  CADKIT_ERR_PARSE = 1,
  CADKIT_ERR_ORDER = 2,
  CADKIT_ERR_INVALID = 3,
  CADKIT_ERR_NOT_WELL_ORIENTED = 4,
  CADKIT_ERR_SEPARATION = 5,
  CADKIT_ERR_INTERNAL = 6,
  CADKIT_ERR_NULL = 7
} cadkit_status;

typedef enum { CADKIT_FORMAT_TEXT = 0, CADKIT_FORMAT_JSON = 1 } cadkit_format;

typedef struct cadkit_options cadkit_options;
typedef struct cadkit_cad cadkit_cad;
typedef struct cadkit_qe_result cadkit_qe_result;
typedef struct cadkit_ccd_tree cadkit_ccd_tree;

CADKIT_API const char* cadkit_version(void);
/* Message of the last failed call on this thread ("" if none). */
CADKIT_API const char* cadkit_last_error(void);
CADKIT_API const char* cadkit_status_name(cadkit_status s);
/* Frees strings returned through char** out-parameters. */
CADKIT_API void cadkit_string_free(char* s);

/* Options are string key/value pairs:
 *   operator     collins | mccallum | ec | tti         (default mccallum)
 *   lifting      full | ec                             (default full)
 *   fallback     abort | collins                       (default abort)
 *   jobs         worker threads, 0 = all cores         (default 1)
 *   language     extended | thom                       (default extended)
 *   merge        true | false                          (default false)
 *   allow-reduced  true | false: ec/tti with free and bound variables
 *   track-projection  true | false
 *   cells        true | false: list every top-level cell in reports
 *   probes, seed separation probes per cell and random seed (3, 1)
 *   steps        projection steps to run, 0 = all (default 0)             */
CADKIT_API cadkit_options* cadkit_options_new(void);
CADKIT_API void cadkit_options_free(cadkit_options* o);
CADKIT_API cadkit_status cadkit_options_set(cadkit_options* o, const char* key, const char* value);

/* Sign-invariant (or truth-table invariant) CAD of `polys`. `order` lists
 * the variables first-projected to last ("a,b,c,x": x is eliminated first);
 * NULL takes the variables in order of appearance. */
CADKIT_API cadkit_status cadkit_cad_build(const char* const* polys, size_t count, const char* order,
                                          const cadkit_options* opts, cadkit_cad** out);
/* CAD for the atoms of a quantifier-free formula; under ec/tti a formula in
 * disjunctive form supplies the clauses. */
CADKIT_API cadkit_status cadkit_cad_build_formula(const char* formula, const char* order, const cadkit_options* opts,
                                                  cadkit_cad** out);
CADKIT_API void cadkit_cad_free(cadkit_cad* c);
CADKIT_API size_t cadkit_cad_dimension(const cadkit_cad* c);
/* Cells of R^k, k = 1..dimension (0 outside that range). */
CADKIT_API size_t cadkit_cad_level_size(const cadkit_cad* c, size_t k);
CADKIT_API size_t cadkit_cad_full_dimensional(const cadkit_cad* c);
/* 1 when the cylindricity and stack-structure checks pass. */
CADKIT_API int cadkit_cad_check(const cadkit_cad* c);
CADKIT_API cadkit_status cadkit_cad_report(const cadkit_cad* c, cadkit_format f, char** out);

/* Projection sets per level. */
CADKIT_API cadkit_status cadkit_project(const char* const* polys, size_t count, const char* order,
                                        const cadkit_options* opts, cadkit_format f, char** out);
/* Projection of the atoms of a quantifier-free formula; ec/tti read the
 * clause structure of a formula in disjunctive form. */
CADKIT_API cadkit_status cadkit_project_formula(const char* formula, const char* order, const cadkit_options* opts,
                                                cadkit_format f, char** out);

CADKIT_API cadkit_status cadkit_qe(const char* formula, const char* order, const cadkit_options* opts,
                                   cadkit_qe_result** out);
CADKIT_API void cadkit_qe_free(cadkit_qe_result* r);
CADKIT_API cadkit_status cadkit_qe_formula(const cadkit_qe_result* r, char** out);
/* 1 true, 0 false, -1 when the input has free variables. */
CADKIT_API int cadkit_qe_truth(const cadkit_qe_result* r);
CADKIT_API cadkit_status cadkit_qe_report(const cadkit_qe_result* r, cadkit_format f, char** out);
/* Truth of a sentence by depth-first lifting. */
CADKIT_API cadkit_status cadkit_decide(const char* sentence, const char* order, const cadkit_options* opts,
                                       int* truth);

CADKIT_API cadkit_status cadkit_ccd_parse(const char* text, cadkit_ccd_tree** out);
CADKIT_API void cadkit_ccd_free(cadkit_ccd_tree* t);
CADKIT_API size_t cadkit_ccd_leaf_count(const cadkit_ccd_tree* t);
/* *ok is 1 when no separation violation was found. */
CADKIT_API cadkit_status cadkit_ccd_validate(const cadkit_ccd_tree* t, const cadkit_options* opts, int* ok,
                                             cadkit_format f, char** report);
CADKIT_API cadkit_status cadkit_ccd_realize(const cadkit_ccd_tree* t, const cadkit_options* opts, cadkit_cad** out);

/* which: collins-time | collins-cells | mccallum-cells | mccallum-cells-refined | davenport-time.
 * *out receives the decimal value. */
CADKIT_API cadkit_status cadkit_bound(const char* which, unsigned long m, unsigned long d, unsigned long l,
                                      unsigned long n, char** out);
/* Davenport-Heintz formula: text and its variable order. */
CADKIT_API cadkit_status cadkit_generate_dh(int m, const char* base, char** formula, char** order);

#ifdef __cplusplus
}
#endif

#endif
