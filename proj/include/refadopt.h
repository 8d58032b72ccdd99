/* C interface to the refadopt toolchain: similarity metrics over code text,
 * adoption classification, and the staged analysis pipeline. All functions
 * are thread-safe; error messages are thread-local. Strings are UTF-8 and
 * NUL-terminated unless a length parameter says otherwise. */

#ifndef REFADOPT_H
#define REFADOPT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum refadopt_status {
  REFADOPT_OK = 0,
  REFADOPT_ERR_USAGE = 1,   /* bad arguments or configuration */
  REFADOPT_ERR_DATA = 2,    /* malformed or unprocessable input */
  REFADOPT_ERR_NETWORK = 3, /* transport failure or rate limit */
  REFADOPT_ERR_IO = 4       /* filesystem failure */
} refadopt_status;

/* Library version, e.g. "0.1.0". */
const char* refadopt_version(void);

/* Message of the calling thread's most recent failure, "" if none.
 * Valid until the next failing call on the same thread. */
const char* refadopt_last_error(void);

/* ---- similarity metrics -------------------------------------------------- */

/* Unit-cost edit distance over Unicode scalars. */
int64_t refadopt_levenshtein_distance(const char* a, const char* b);

/* 1 - distance / max(len); two empty strings score 1.0. */
double refadopt_levenshtein_similarity(const char* a, const char* b);

/* Character n-gram set intersection-over-union; n >= 1.
 * Returns a negative value and sets the error message on bad arguments. */
double refadopt_jaccard_similarity(const char* a, const char* b, int n);

/* Fraction of `committed` tokens that also occur in `suggestion`. */
double refadopt_token_match_rate(const char* committed, const char* suggestion);

/* The k most frequent token n-grams (orders 1..4) over a text corpus;
 * CrystalBLEU discounts these before computing precisions. */
typedef struct refadopt_trivial_set refadopt_trivial_set;

refadopt_trivial_set* refadopt_trivial_set_build(const char* const* texts,
                                                 size_t text_count, size_t k);
size_t refadopt_trivial_set_size(const refadopt_trivial_set* set);
void refadopt_trivial_set_free(refadopt_trivial_set* set);

/* BLEU of candidate against reference after removing trivially shared
 * n-grams; `trivial` may be NULL for plain BLEU. Negative on error. */
double refadopt_crystal_bleu(const char* candidate, const char* reference,
                             const refadopt_trivial_set* trivial);

/* ---- adoption classification --------------------------------------------- */

/* Writes the level name ("FULL", "SELECTIVE", "MINOR_MODIFICATION",
 * "RESTRUCTURED", "MAJOR_MODIFICATION") for the four scores into *name. The
 * pointer stays valid for the process lifetime. */
refadopt_status refadopt_classify(double levenshtein_similarity,
                                  double jaccard_3gram, double token_match_rate,
                                  double crystal_bleu, double threshold_high,
                                  double threshold_low, double tmr_high,
                                  const char** name);

/* ---- pipeline ------------------------------------------------------------- */

typedef struct refadopt_config refadopt_config;

refadopt_config* refadopt_config_new(void);
void refadopt_config_free(refadopt_config* config);

/* Keys mirror the CLI flags: corpus, cache-dir, keywords, exclusions,
 * threshold-high, threshold-low, tmr-high, crystal-k, jaccard-n, out,
 * offline (true/false), min-similarity, jobs, seed. */
refadopt_status refadopt_config_set(refadopt_config* config, const char* key,
                                    const char* value);

/* Runs "filter", "fetch", "extract", "map", "score", "classify", "report",
 * or "run" (the whole pipeline). Warnings, if any, are returned as a
 * newline-separated string owned by the calling thread; pass NULL to skip. */
refadopt_status refadopt_run_stage(const refadopt_config* config,
                                   const char* stage, const char** warnings);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* REFADOPT_H */
