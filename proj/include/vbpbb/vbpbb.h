#ifndef VBPBB_H
#define VBPBB_H

/*
 * C interface to the variable bandpass periodic block bootstrap library.
 *
 * Objects are opaque handles created by *_create / *_read / *_simulate
 * functions and released with the matching *_destroy. Every function that can
 * fail returns a vbpbb_status; on failure vbpbb_last_error() describes the
 * problem for the calling thread until its next failing call.
 *
 * Output buffers follow one convention: the caller passes a buffer and its
 * capacity, the library stores the required size in *needed and fills the
 * buffer only when it is large enough (VBPBB_ERR_BUFFER_TOO_SMALL otherwise).
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(VBPBB_BUILDING_LIBRARY)
#    define VBPBB_API __declspec(dllexport)
#  else
#    define VBPBB_API __declspec(dllimport)
#  endif
#else
#  define VBPBB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vbpbb_status {
  VBPBB_OK = 0,
  VBPBB_ERR_INVALID_ARGUMENT = 1,
  VBPBB_ERR_PERIOD_EXCEEDS_LENGTH,
  VBPBB_ERR_SERIES_TOO_SHORT,
  VBPBB_ERR_HARMONIC_ABOVE_NYQUIST,
  VBPBB_ERR_NEED_TWO_FREQUENCIES,
  VBPBB_ERR_NOT_ODD,
  VBPBB_ERR_SERIES_SHORTER_THAN_WINDOW,
  VBPBB_ERR_DEGENERATE_ENSEMBLE,
  VBPBB_ERR_MISMATCHED_B,
  VBPBB_ERR_INCOMPARABLE_BANDS,
  VBPBB_ERR_ALL_ZERO_WIDTHS,
  VBPBB_ERR_NO_OVERLAP,
  VBPBB_ERR_ZERO_VARIANCE,
  VBPBB_ERR_MISSING_COLUMN,
  VBPBB_ERR_NON_MONOTONE_TIMESTAMPS,
  VBPBB_ERR_GAP_DETECTED,
  VBPBB_ERR_UNPARSEABLE_VALUE,
  VBPBB_ERR_IO,
  VBPBB_ERR_BUFFER_TOO_SMALL = 100,
  VBPBB_ERR_NULL_ARGUMENT,
  VBPBB_ERR_NOT_RUN,
  VBPBB_ERR_INTERNAL
} vbpbb_status;

typedef struct vbpbb_series vbpbb_series;
typedef struct vbpbb_analysis vbpbb_analysis;

typedef struct vbpbb_csv_options {
  const char* timestamp_column; /* NULL: "timestamp" */
  const char* value_column;     /* NULL: "value" */
  double step_hours;            /* <= 0: 1.0 */
  int decimal_comma;            /* nonzero: "1.234,56" style numbers */
  char delimiter;               /* 0: ',' */
} vbpbb_csv_options;

VBPBB_API const char* vbpbb_version(void);
VBPBB_API const char* vbpbb_status_name(vbpbb_status status);
VBPBB_API const char* vbpbb_last_error(void);

/* ---- series ---------------------------------------------------------- */

VBPBB_API vbpbb_status vbpbb_series_create(const double* values, size_t length,
                                           int64_t start_unix_seconds, double step_hours,
                                           vbpbb_series** out);
VBPBB_API vbpbb_status vbpbb_series_read_csv(const char* path, const vbpbb_csv_options* options,
                                             vbpbb_series** out);
/* spec_json: {"length_samples", "components": [{"period_samples", "waveform",
 * "amplitude", "square_terms"}], "noise_sd", "trend_slope", "seed",
 * "start_time", "step_hours"} */
VBPBB_API vbpbb_status vbpbb_series_simulate(const char* spec_json, vbpbb_series** out);
VBPBB_API void vbpbb_series_destroy(vbpbb_series* series);

VBPBB_API size_t vbpbb_series_length(const vbpbb_series* series);
VBPBB_API double vbpbb_series_step_hours(const vbpbb_series* series);
VBPBB_API int64_t vbpbb_series_start(const vbpbb_series* series);
VBPBB_API vbpbb_status vbpbb_series_values(const vbpbb_series* series, double* buffer,
                                           size_t capacity, size_t* needed);
VBPBB_API vbpbb_status vbpbb_series_center(const vbpbb_series* series, vbpbb_series** out,
                                           double* grand_mean);
VBPBB_API vbpbb_status vbpbb_series_write_csv(const vbpbb_series* series, const char* path,
                                              const char* value_header);

/* Periodic means per phase; counts may be NULL. */
VBPBB_API vbpbb_status vbpbb_periodic_mean(const vbpbb_series* series, size_t period_samples,
                                           double* means, size_t* counts, size_t capacity);

/* ---- spectral -------------------------------------------------------- */

VBPBB_API vbpbb_status vbpbb_periodogram(const vbpbb_series* series, double* frequencies,
                                         double* power, size_t capacity, size_t* needed);
VBPBB_API vbpbb_status vbpbb_periodogram_write_csv(const vbpbb_series* series, const char* path);
/* override_m == 0 means "no override". */
VBPBB_API vbpbb_status vbpbb_plan_bandwidth(const double* frequencies, size_t count,
                                            size_t override_m, size_t* m_out);

/* ---- KZFT ------------------------------------------------------------ */

VBPBB_API vbpbb_status vbpbb_kzft_coefficients(size_t m, size_t k, double* buffer,
                                               size_t capacity, size_t* needed);
/* Filters at frequency v (cycles/sample) and returns the reconstructed real
 * component, which starts k(m-1)/2 samples after the source. */
VBPBB_API vbpbb_status vbpbb_kzft_filter(const vbpbb_series* series, size_t m, size_t k,
                                         double v, vbpbb_series** out);

/* ---- analysis pipeline ----------------------------------------------- */

/* config_json uses the analysis config file schema. */
VBPBB_API vbpbb_status vbpbb_analysis_create(const char* config_json, vbpbb_analysis** out);
VBPBB_API vbpbb_status vbpbb_analysis_run(vbpbb_analysis* analysis);
/* out_dir NULL: the configured output directory. */
VBPBB_API vbpbb_status vbpbb_analysis_write(const vbpbb_analysis* analysis, const char* out_dir);
VBPBB_API vbpbb_status vbpbb_analysis_summary_json(const vbpbb_analysis* analysis, char* buffer,
                                                   size_t capacity, size_t* needed);
VBPBB_API void vbpbb_analysis_destroy(vbpbb_analysis* analysis);

#ifdef __cplusplus
}
#endif

#endif /* VBPBB_H */
