/* C interface to the time-series compression toolkit: synthetic ECG
 * generation, dataset I/O and preprocessing, wavelet / FPCA / VAE
 * compression, benchmark sweeps, noise experiments, and reconstruction-error
 * anomaly detection.
 *
 * Every fallible call returns a tsc_status; on failure the thread-local
 * message from tsc_last_error() describes what went wrong and no output
 * handle is produced. Handles are freed with the matching *_free call.
 */
#ifndef TSC_H
#define TSC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    TSC_OK = 0,
    TSC_ERR_INVALID = 1,
    TSC_ERR_IO = 2,
    TSC_ERR_FORMAT = 3,
    TSC_ERR_NUMERIC = 4,
    TSC_ERR_UNKNOWN = 5
};
typedef int tsc_status;

/* Message for the most recent failing call on this thread. */
const char* tsc_last_error(void);

/* Worker cap for internal parallelism; 0 restores the hardware default.
 * Never affects results. */
tsc_status tsc_set_thread_count(int n);

typedef struct tsc_dataset tsc_dataset;
typedef struct tsc_vae tsc_vae;
typedef struct tsc_fpca tsc_fpca;
typedef struct tsc_results tsc_results;     /* benchmark / noise rows */
typedef struct tsc_detectors tsc_detectors; /* anomaly confusion rows */

void tsc_dataset_free(tsc_dataset* ds);
void tsc_vae_free(tsc_vae* vae);
void tsc_fpca_free(tsc_fpca* basis);
void tsc_results_free(tsc_results* results);
void tsc_detectors_free(tsc_detectors* detectors);

/* ---------- datasets ---------- */

typedef struct tsc_synth_config {
    int64_t count;
    int32_t channels;
    int32_t length;
    double sampling_rate;
    double heart_rate_low;  /* bpm */
    double heart_rate_high; /* bpm */
    double anomaly_fraction;
    uint64_t seed;
} tsc_synth_config;

void tsc_synth_config_default(tsc_synth_config* cfg);
tsc_status tsc_synth(const tsc_synth_config* cfg, tsc_dataset** out);

/* format: "csv", "raw", or "auto" (pick by file extension). */
tsc_status tsc_dataset_load(const char* path, const char* format, tsc_dataset** out);
tsc_status tsc_dataset_save(const tsc_dataset* ds, const char* path, const char* format);

int64_t tsc_dataset_count(const tsc_dataset* ds);
int32_t tsc_dataset_channels(const tsc_dataset* ds);
int32_t tsc_dataset_length(const tsc_dataset* ds);
double tsc_dataset_sampling_rate(const tsc_dataset* ds);

/* Per-channel z-score over the whole dataset. out_mean / out_std, when
 * non-NULL, receive one value per channel. */
tsc_status tsc_dataset_standardize(const tsc_dataset* ds, double* out_mean, double* out_std,
                                   tsc_dataset** out);
tsc_status tsc_dataset_resample(const tsc_dataset* ds, double target_rate, tsc_dataset** out);
tsc_status tsc_dataset_add_noise(const tsc_dataset* ds, double variance_ratio, uint64_t seed,
                                 tsc_dataset** out);
/* label: "normal" or "anomaly". Fails if nothing matches. */
tsc_status tsc_dataset_filter_label(const tsc_dataset* ds, const char* label, tsc_dataset** out);
/* Deterministic shuffled split; about `fraction` of the records go to
 * *out_a. Fails if either side would be empty. */
tsc_status tsc_dataset_split(const tsc_dataset* ds, double fraction, uint64_t seed,
                             tsc_dataset** out_a, tsc_dataset** out_b);

/* ---------- wavelet / FPCA sweeps ---------- */

/* family: "haar" or "db4"; levels 0 picks the depth automatically.
 * method: "global" or "oracle". Emits one summary row per fraction under
 * `dataset_id`, preceded by one row per record when per_record is nonzero. */
tsc_status tsc_wavelet_sweep(const tsc_dataset* ds, const char* dataset_id, const char* family,
                             int levels, const char* method, const double* fractions,
                             size_t fraction_count, int per_record, tsc_results** out);

tsc_status tsc_fpca_fit(const tsc_dataset* ds, int components, tsc_fpca** out);
tsc_status tsc_fpca_eval(const tsc_fpca* basis, const tsc_dataset* ds, int components,
                         double* out_mse);
/* Mean curve plus components viewed as records, for dumping. */
tsc_status tsc_fpca_basis_dataset(const tsc_fpca* basis, tsc_dataset** out);
/* One summary row per fraction; component counts derive from the fractions,
 * capped at max_components when positive. */
tsc_status tsc_fpca_sweep(const tsc_dataset* ds, const char* dataset_id, const double* fractions,
                          size_t fraction_count, int max_components, tsc_results** out);

/* ---------- VAE ---------- */

typedef struct tsc_vae_config {
    int32_t in_channels;
    int32_t crop_len;
    int32_t conv_channels[3];
    int32_t kernel_size; /* odd */
    int32_t strides[3];
    int32_t latent_dim;
    double beta; /* KL weight */
} tsc_vae_config;

typedef struct tsc_train_config {
    int32_t epochs;
    int32_t batch_size;
    double learning_rate;
    uint64_t seed;
    double resample_low;  /* augmentation factor range around 1 */
    double resample_high;
    double kl_beta;
    double validation_fraction;
} tsc_train_config;

typedef struct tsc_train_stats {
    int32_t best_epoch; /* zero-based */
    double final_train_loss;
    double best_val_loss;
    double best_val_recon;
} tsc_train_stats;

void tsc_vae_config_default(tsc_vae_config* cfg);
void tsc_train_config_default(tsc_train_config* cfg);

tsc_status tsc_vae_train(const tsc_dataset* ds, const tsc_vae_config* vcfg,
                         const tsc_train_config* tcfg, tsc_vae** out, tsc_train_stats* stats);
tsc_status tsc_vae_save(const tsc_vae* vae, const char* path);
tsc_status tsc_vae_load(const char* path, tsc_vae** out);
int32_t tsc_vae_latent_dim(const tsc_vae* vae);
int64_t tsc_vae_parameter_count(const tsc_vae* vae);
tsc_status tsc_vae_eval(const tsc_vae* vae, const tsc_dataset* ds, double* out_mse);
tsc_status tsc_vae_reconstruct(const tsc_vae* vae, const tsc_dataset* ds, tsc_dataset** out);
/* out_errors must hold tsc_dataset_count(ds) doubles. */
tsc_status tsc_vae_record_errors(const tsc_vae* vae, const tsc_dataset* ds, double* out_errors);

/* ---------- experiments ---------- */

/* methods: entries from "vae", "global", "oracle", "fpca". VAE rows train
 * in-run with (vcfg, tcfg) unless checkpoints supply a model whose latent
 * size matches the fraction's budget; with checkpoints present, a missing
 * budget is an error. vcfg / tcfg may be NULL for defaults. */
tsc_status tsc_bench_run(const tsc_dataset* ds, const char* dataset_id,
                         const char* const* methods, size_t method_count,
                         const double* fractions, size_t fraction_count, const char* family,
                         int levels, const tsc_vae_config* vcfg, const tsc_train_config* tcfg,
                         const char* const* checkpoints, size_t checkpoint_count,
                         tsc_results** out);

/* One VAE row per dataset; every dataset must match training_rate. */
tsc_status tsc_cross_eval(const tsc_vae* vae, const tsc_dataset* const* datasets,
                          const char* const* ids, size_t count, double training_rate,
                          tsc_results** out);

/* Three rows (clean/clean, clean/noisy, noisy/noisy training/test regimes),
 * each scored against the clean targets. */
tsc_status tsc_noise_run(const tsc_dataset* ds, const char* dataset_id, double variance_ratio,
                         uint64_t seed, const tsc_vae_config* vcfg,
                         const tsc_train_config* tcfg, tsc_results** out);

/* Trains on train_normal (all records must be labeled normal), picks each
 * detector's threshold on the validation set by balanced accuracy, and
 * reports test-set confusion rows for the VAE and the wavelet-global
 * baseline (budget = wavelet_fraction of the coefficients). */
tsc_status tsc_anomaly_run(const tsc_dataset* train_normal, const tsc_dataset* validation,
                           const tsc_dataset* test, const tsc_vae_config* vcfg,
                           const tsc_train_config* tcfg, const char* family, int levels,
                           double wavelet_fraction, double* out_vae_threshold,
                           double* out_wavelet_threshold, tsc_detectors** out);

/* ---------- results ---------- */

typedef struct tsc_result_row {
    const char* dataset; /* borrowed; valid while the handle lives */
    const char* method;
    double kept_fraction;
    double mse;
    const char* regime; /* empty when not applicable */
} tsc_result_row;

size_t tsc_results_count(const tsc_results* results);
tsc_status tsc_results_row(const tsc_results* results, size_t index, tsc_result_row* out);
/* Appends the reference comparison rows for the public 12-lead sets. */
tsc_status tsc_results_append_reference(tsc_results* results);
tsc_status tsc_results_write_csv(const tsc_results* results, const char* path);
tsc_status tsc_results_write_svg(const tsc_results* results, const char* path);

typedef struct tsc_detector_row {
    const char* detector; /* borrowed; valid while the handle lives */
    int64_t tp;
    int64_t fp;
    int64_t tn;
    int64_t fn;
    double balanced_accuracy;
} tsc_detector_row;

size_t tsc_detectors_count(const tsc_detectors* detectors);
tsc_status tsc_detectors_row(const tsc_detectors* detectors, size_t index,
                             tsc_detector_row* out);
tsc_status tsc_detectors_write_csv(const tsc_detectors* detectors, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* TSC_H */
