/*
 * netcf - neighborhood collaborative filtering over similarity networks.
 *
 * C API of the shared library. All functions return a netcf_status; every
 * non-OK status leaves a human-readable message retrievable (per thread)
 * through netcf_last_error(). Objects are opaque handles released with the
 * matching *_free function; freeing NULL is a no-op.
 */

#ifndef NETCF_H
#define NETCF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NETCF_API __declspec(dllexport)
#else
#define NETCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum netcf_status {
    NETCF_OK = 0,
    NETCF_ERR_IO = 1,          /* file missing/unreadable/unwritable */
    NETCF_ERR_PARSE = 2,       /* malformed input row */
    NETCF_ERR_VALIDATION = 3,  /* value outside declared constraints */
    NETCF_ERR_CONFIG = 4,      /* experiment config problem */
    NETCF_ERR_ARGUMENT = 5,    /* bad argument/name/axis combination */
    NETCF_ERR_CONVERGENCE = 6, /* iterative solver hit its cap */
    NETCF_ERR_UNDEFINED = 7,   /* similarity undefined for the pair */
    NETCF_ERR_ABSTAINED = 8,   /* prediction abstained under skip policy */
    NETCF_ERR_INTERNAL = 9
} netcf_status;

typedef struct netcf_matrix netcf_matrix;
typedef struct netcf_similarity netcf_similarity;
typedef struct netcf_network netcf_network;
typedef struct netcf_predictor netcf_predictor;

NETCF_API const char* netcf_version(void);
NETCF_API const char* netcf_status_name(netcf_status status);
/* Message of the calling thread's last failure; empty string if none. */
NETCF_API const char* netcf_last_error(void);

/* ---- rating matrices ---------------------------------------------------- */

/* format: "csv", "tsv", "dcolon" or "auto"/NULL. Ratings validated against
 * the inclusive integer domain [lo, hi]. */
NETCF_API netcf_status netcf_matrix_load(const char* path, const char* format, int lo, int hi,
                                         netcf_matrix** out);
/* Deterministic synthetic benchmark matrix (MovieLens-100k-like shape). */
NETCF_API netcf_status netcf_matrix_synth(uint32_t n_users, uint32_t n_items, uint64_t n_ratings,
                                          uint64_t seed, netcf_matrix** out);
NETCF_API void netcf_matrix_free(netcf_matrix* m);
NETCF_API netcf_status netcf_matrix_dims(const netcf_matrix* m, uint32_t* n_users,
                                         uint32_t* n_items, uint64_t* n_ratings);
NETCF_API netcf_status netcf_matrix_density(const netcf_matrix* m, double* out);
NETCF_API netcf_status netcf_matrix_hash(const netcf_matrix* m, uint64_t* out);
/* Canonical `user_id,item_id,rating` CSV with header. */
NETCF_API netcf_status netcf_matrix_export_csv(const netcf_matrix* m, const char* path);
/* fraction in [0,1): per-axis uniform removal; axis is "user" or "item". */
NETCF_API netcf_status netcf_matrix_sparsify(const netcf_matrix* m, double fraction,
                                             const char* axis, uint64_t seed, netcf_matrix** out);

/* ---- similarities and networks ------------------------------------------ */

/* measure: pcc, cosine, adjcos, cpcc, jaccard-corated, pip, nhsm, net-cn,
 * net-jaccard, net-katz. axis: "user" or "item". */
NETCF_API netcf_status netcf_similarity_compute(const netcf_matrix* m, const char* measure,
                                                const char* axis, netcf_similarity** out);
NETCF_API void netcf_similarity_free(netcf_similarity* s);
NETCF_API netcf_status netcf_similarity_size(const netcf_similarity* s, uint32_t* out);
/* NETCF_ERR_UNDEFINED when the pair has no defined score. */
NETCF_API netcf_status netcf_similarity_get(const netcf_similarity* s, uint32_t i, uint32_t j,
                                            double* out);
NETCF_API netcf_status netcf_similarity_undefined_pairs(const netcf_similarity* s, uint64_t* out);
NETCF_API netcf_status netcf_similarity_export_csv(const netcf_similarity* s, const char* path);
/* Binary cache keyed by (matrix hash, measure, axis). Loading verifies the key. */
NETCF_API netcf_status netcf_similarity_save_cache(const netcf_similarity* s,
                                                   const netcf_matrix* m, const char* path);
NETCF_API netcf_status netcf_similarity_load_cache(const char* path, const netcf_matrix* m,
                                                   const char* measure, const char* axis,
                                                   netcf_similarity** out);

NETCF_API netcf_status netcf_network_build(const netcf_similarity* s, netcf_network** out);
NETCF_API void netcf_network_free(netcf_network* g);
NETCF_API netcf_status netcf_network_edge_count(const netcf_network* g, uint64_t* out);
NETCF_API netcf_status netcf_network_export_csv(const netcf_network* g, const char* path);
NETCF_API netcf_status netcf_network_spectral_radius(const netcf_network* g, double* out);
/* kind: "net-cn", "net-jaccard", "net-katz". beta <= 0 selects 0.85/lambda_1
 * (katz only; ignored otherwise). */
NETCF_API netcf_status netcf_network_structural(const netcf_network* g, const char* kind,
                                                double beta, netcf_similarity** out);

/* ---- prediction ---------------------------------------------------------- */

typedef struct netcf_prediction {
    double value;
    double raw;
    int abstained;
    int used_fallback;
    uint32_t neighbors_used;
    uint32_t intermediate_used;
} netcf_prediction;

/* method: "user", "item", "hb1", "hb2". measure names the similarity source
 * (hybrids accept a structural name, defaulting to net-jaccard otherwise).
 * fallback: "mean" or "skip". The predictor owns copies of everything it
 * needs; the matrix handle may be freed afterwards. */
NETCF_API netcf_status netcf_predictor_new(const netcf_matrix* train, const char* method,
                                           const char* measure, uint32_t k, uint32_t k_items,
                                           const char* fallback, int clamp,
                                           netcf_predictor** out);
NETCF_API void netcf_predictor_free(netcf_predictor* p);
/* Raw dataset ids, as they appeared in the loaded file. */
NETCF_API netcf_status netcf_predictor_predict(const netcf_predictor* p, const char* user_id,
                                               const char* item_id, netcf_prediction* out);

/* ---- experiment harness -------------------------------------------------- */

/* Runs a config file end to end, writing reports, plot CSVs and summary.csv.
 * seed_override < 0 and empty/NULL out_override keep the config values. */
NETCF_API netcf_status netcf_run_config(const char* config_path, int64_t seed_override,
                                        const char* out_override);

/* Undefined-similarity census (the NaN experiment): groups is a
 * comma-separated list of ranges like "20-25,100-149,150-". Results land in
 * out_csv. */
NETCF_API netcf_status netcf_nan_count(const char* dataset, const char* format, int lo, int hi,
                                       const char* axis, const char* groups, uint32_t sample_size,
                                       uint64_t seed, const char* measure, const char* out_csv);

/* Batch prediction over `user,item` pairs read from pairs_csv. */
NETCF_API netcf_status netcf_batch_predict(const netcf_matrix* train, const char* method,
                                           const char* measure, uint32_t k, uint32_t k_items,
                                           const char* fallback, int clamp, const char* pairs_csv,
                                           const char* out_csv);

#ifdef __cplusplus
}
#endif

#endif /* NETCF_H */
