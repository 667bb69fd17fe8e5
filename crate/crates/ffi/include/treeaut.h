#ifndef TREEAUT_H
#define TREEAUT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TaStatus {
  TA_STATUS_OK = 0,
  TA_STATUS_NULL_POINTER = 1,
  TA_STATUS_INVALID_UTF8 = 2,
  TA_STATUS_SYNTAX = 3,
  TA_STATUS_VALIDATION = 4,
  TA_STATUS_UNKNOWN_FIXTURE = 5,
  TA_STATUS_EXPRESSION = 6,
  TA_STATUS_GROUP = 7,
  TA_STATUS_VERTEX = 8,
  TA_STATUS_CAP_EXCEEDED = 9,
  TA_STATUS_TOPOLOGY = 10,
  TA_STATUS_UNKNOWN_SUITE = 11,
  /**
   * A verification suite ran and at least one check failed.
   */
  TA_STATUS_CHECK_FAILED = 12,
  TA_STATUS_PANIC = 13,
} TaStatus;

/**
 * Opaque automaton handle.
 */
typedef struct TaAutomaton TaAutomaton;

/**
 * Opaque element handle.
 */
typedef struct TaElement TaElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Caller frees it
 * with `ta_string_free`.
 */
char *ta_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ta_string_free(char *s);

/**
 * Parses and validates an automaton in the text format.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum TaStatus ta_automaton_parse(const char *text, struct TaAutomaton **out);

/**
 * Loads a shipped fixture: `rootswap`, `odometer` or `grigorchuk`.
 *
 * # Safety
 * `name` must be a nul-terminated string; `out` must be writable.
 */
enum TaStatus ta_automaton_fixture(const char *name, struct TaAutomaton **out);

/**
 * # Safety
 * `aut` must be null or a handle from this library, not yet freed.
 */
void ta_automaton_free(struct TaAutomaton *aut);

/**
 * Alphabet size, or 0 for a null handle.
 *
 * # Safety
 * `aut` must be null or a live handle.
 */
size_t ta_automaton_alphabet_size(const struct TaAutomaton *aut);

/**
 * Parses an expression such as `a*b^-1` over the automaton's state names.
 *
 * # Safety
 * `aut` must be a live handle, `expr` a nul-terminated string, `out` writable.
 */
enum TaStatus ta_element_parse(const struct TaAutomaton *aut,
                               const char *expr,
                               struct TaElement **out);

/**
 * # Safety
 * `g` must be null or a handle from this library, not yet freed.
 */
void ta_element_free(struct TaElement *g);

/**
 * `g*h`, acting as `h` first.
 *
 * # Safety
 * `g`, `h` must be live handles; `out` writable.
 */
enum TaStatus ta_element_compose(const struct TaElement *g,
                                 const struct TaElement *h,
                                 struct TaElement **out);

/**
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum TaStatus ta_element_inverse(const struct TaElement *g, struct TaElement **out);

/**
 * Word form of an element, e.g. `a*b^-1`.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum TaStatus ta_element_to_string(const struct TaElement *g, char **out);

/**
 * Image of a vertex given as a digit string (`""` or `ε` for the root).
 *
 * # Safety
 * `g` must be a live handle, `vertex` a nul-terminated string, `out` writable.
 */
enum TaStatus ta_element_apply(const struct TaElement *g, const char *vertex, char **out);

/**
 * Exact equality of the actions on the whole tree.
 *
 * # Safety
 * `g`, `h` must be live handles; `out` writable.
 */
enum TaStatus ta_element_equals(const struct TaElement *g, const struct TaElement *h, bool *out);

/**
 * Membership in the level-`level` stabilizer.
 *
 * # Safety
 * `g` must be a live handle; `out` writable.
 */
enum TaStatus ta_element_in_stab(const struct TaElement *g, size_t level, bool *out);

/**
 * Membership in the rigid stabilizer of `vertex`.
 *
 * # Safety
 * `g` must be a live handle, `vertex` a nul-terminated string, `out` writable.
 */
enum TaStatus ta_element_in_rist(const struct TaElement *g,
                                 const char *vertex,
                                 size_t depth,
                                 bool *out);

/**
 * Congruence distance `2^-k`; `TA_STATUS_CAP_EXCEEDED` when the elements
 * agree through level `cap` without being equal.
 *
 * # Safety
 * `g`, `h` must be live handles; `out` writable.
 */
enum TaStatus ta_distance(const struct TaElement *g,
                          const struct TaElement *h,
                          size_t cap,
                          double *out);

/**
 * Runs a verification suite (`axioms`, `smooth-curves`, `d-topology`,
 * `discreteness`) with its default instances and writes the report, one
 * tab-separated record per check. `aut` selects the automaton for `axioms`;
 * null means all fixtures. Returns `TA_STATUS_CHECK_FAILED` if any check
 * fails; the report is written in either case.
 *
 * # Safety
 * `suite` must be a nul-terminated string, `aut` null or a live handle,
 * `report` writable.
 */
enum TaStatus ta_verify(const char *suite, const struct TaAutomaton *aut, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TREEAUT_H */
