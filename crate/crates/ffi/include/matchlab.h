#ifndef MATCHLAB_H
#define MATCHLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>



typedef enum MatchlabClass {
  MATCHLAB_CLASS_TRUTHFUL = 0,
  MATCHLAB_CLASS_TRUNCATION = 1,
  MATCHLAB_CLASS_DROPPING = 2,
  MATCHLAB_CLASS_FULL = 3,
} MatchlabClass;

typedef enum MatchlabStatus {
  MATCHLAB_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  MATCHLAB_STATUS_NULL_ARGUMENT = 1,
  /*
   A string argument was not valid UTF-8.
   */
  MATCHLAB_STATUS_INVALID_UTF8 = 2,
  /*
   Malformed input, failed validation or an out-of-range argument.
   */
  MATCHLAB_STATUS_INVALID = 3,
  /*
   A construction's own consistency checks failed.
   */
  MATCHLAB_STATUS_CONSTRUCTION = 4,
  /*
   An enumeration would exceed its profile budget.
   */
  MATCHLAB_STATUS_BUDGET_EXCEEDED = 5,
  /*
   A caller-provided buffer is too small.
   */
  MATCHLAB_STATUS_BUFFER_TOO_SMALL = 6,
  /*
   An internal panic was caught at the boundary.
   */
  MATCHLAB_STATUS_PANIC = 7,
} MatchlabStatus;

/*
 A generated economy with its named profiles and expectations.
 */
typedef struct MatchlabBundle MatchlabBundle;

/*
 An economy: agents, states, beliefs and utilities.
 */
typedef struct MatchlabEconomy MatchlabEconomy;

/*
 One report per worker.
 */
typedef struct MatchlabProfile MatchlabProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread; empty after success.
 The pointer stays valid until the next call on this thread.
 */
const char *matchlab_last_error(void);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void matchlab_string_free(char *s);

/*
 Parses an economy file.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum MatchlabStatus matchlab_economy_from_json(const char *json,
                                               struct MatchlabEconomy **out_economy);

/*
 # Safety
 `economy` must be a live handle; `out_json` must be writable.
 */
enum MatchlabStatus matchlab_economy_to_json(const struct MatchlabEconomy *economy,
                                             char **out_json);

/*
 # Safety
 Any out-pointer may be null; non-null ones must be writable.
 */
enum MatchlabStatus matchlab_economy_dimensions(const struct MatchlabEconomy *economy,
                                                size_t *out_firms,
                                                size_t *out_workers,
                                                size_t *out_states);

/*
 # Safety
 `economy` must be null or a live handle.
 */
void matchlab_economy_free(struct MatchlabEconomy *economy);

/*
 # Safety
 `economy` and `json` must be valid; `out_profile` must be writable.
 */
enum MatchlabStatus matchlab_profile_from_json(const struct MatchlabEconomy *economy,
                                               const char *json,
                                               struct MatchlabProfile **out_profile);

/*
 Every worker reports its true list.

 # Safety
 `economy` must be a live handle; `out_profile` must be writable.
 */
enum MatchlabStatus matchlab_profile_truthful(const struct MatchlabEconomy *economy,
                                              struct MatchlabProfile **out_profile);

/*
 # Safety
 Handles must be live; `out_json` must be writable.
 */
enum MatchlabStatus matchlab_profile_to_json(const struct MatchlabEconomy *economy,
                                             const struct MatchlabProfile *profile,
                                             char **out_json);

/*
 # Safety
 `profile` must be null or a live handle.
 */
void matchlab_profile_free(struct MatchlabProfile *profile);

/*
 Runs firm-proposing DA in every state. Writes `states x workers` firm
 indices (state-major, zero-based) to `out_partners`, with
 `MATCHLAB_UNMATCHED` for unmatched workers.

 # Safety
 Handles must be live; `out_partners` must hold `len` elements.
 */
enum MatchlabStatus matchlab_play(const struct MatchlabEconomy *economy,
                                  const struct MatchlabProfile *profile,
                                  size_t *out_partners,
                                  size_t len);

/*
 Expected utility of `worker` as an exact fraction.

 # Safety
 Handles must be live; out-pointers must be writable.
 */
enum MatchlabStatus matchlab_expected_utility(const struct MatchlabEconomy *economy,
                                              const struct MatchlabProfile *profile,
                                              size_t worker,
                                              int64_t *out_numerator,
                                              int64_t *out_denominator);

/*
 Whether no worker gains by deviating within `class`.

 # Safety
 Handles must be live; `out_is_bne` must be writable.
 */
enum MatchlabStatus matchlab_is_bne(const struct MatchlabEconomy *economy,
                                    const struct MatchlabProfile *profile,
                                    enum MatchlabClass class_,
                                    bool *out_is_bne);

/*
 Enumerates equilibria of `class` and writes the grouped result as JSON.
 A `budget` of 0 selects the default.

 # Safety
 `economy` must be live; out-pointers must be writable (`out_groups` may
 be null).
 */
enum MatchlabStatus matchlab_enumerate_bne(const struct MatchlabEconomy *economy,
                                           enum MatchlabClass class_,
                                           bool undominated_only,
                                           uint64_t budget,
                                           size_t *out_groups,
                                           char **out_json);

/*
 Whether the economy satisfies SPC*.

 # Safety
 `economy` must be live; `out_holds` must be writable.
 */
enum MatchlabStatus matchlab_check_spc_star(const struct MatchlabEconomy *economy, bool *out_holds);

/*
 # Safety
 `out_bundle` must be writable.
 */
enum MatchlabStatus matchlab_bundle_motivating(struct MatchlabBundle **out_bundle);

/*
 # Safety
 `out_bundle` must be writable.
 */
enum MatchlabStatus matchlab_bundle_example2(size_t n, struct MatchlabBundle **out_bundle);

/*
 # Safety
 `out_bundle` must be writable.
 */
enum MatchlabStatus matchlab_bundle_prop4(size_t n, size_t k, struct MatchlabBundle **out_bundle);

/*
 A new economy handle copied from the bundle.

 # Safety
 `bundle` must be live; `out_economy` must be writable.
 */
enum MatchlabStatus matchlab_bundle_economy(const struct MatchlabBundle *bundle,
                                            struct MatchlabEconomy **out_economy);

/*
 A new profile handle for the bundle's profile called `name`.

 # Safety
 `bundle` and `name` must be valid; `out_profile` must be writable.
 */
enum MatchlabStatus matchlab_bundle_profile(const struct MatchlabBundle *bundle,
                                            const char *name,
                                            struct MatchlabProfile **out_profile);

/*
 The bundle's expectations manifest, with profile `p` named
 `profile-p.json`.

 # Safety
 `bundle` must be live; `out_json` must be writable.
 */
enum MatchlabStatus matchlab_bundle_manifest(const struct MatchlabBundle *bundle, char **out_json);

/*
 # Safety
 `bundle` must be null or a live handle.
 */
void matchlab_bundle_free(struct MatchlabBundle *bundle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MATCHLAB_H */
