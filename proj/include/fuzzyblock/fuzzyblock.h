#ifndef FUZZYBLOCK_H
#define FUZZYBLOCK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef FUZZYBLOCK_BUILDING
#    define FB_API __declspec(dllexport)
#  else
#    define FB_API __declspec(dllimport)
#  endif
#else
#  define FB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fb_status {
  FB_OK = 0,
  FB_ERR_INVALID_ARGUMENT = 1,
  FB_ERR_IO = 2,
  FB_ERR_PARSE = 3,
  FB_ERR_SCHEMA = 4,
  FB_ERR_SEMANTIC = 5,
  FB_ERR_NUMERIC = 6,
  FB_ERR_MODE_INCONSISTENCY = 7,
  FB_ERR_UNBOUNDED = 8,
  FB_ERR_INTERNAL = 9
} fb_status;

typedef enum fb_delta_variant { FB_DELTA_PAPER = 0, FB_DELTA_STANDARD = 1 } fb_delta_variant;
typedef enum fb_format { FB_FORMAT_CSV = 0, FB_FORMAT_TABLE = 1, FB_FORMAT_SVG = 2 } fb_format;
typedef enum fb_block_class { FB_BLOCK_INFINITE = 0, FB_BLOCK_TAPERED = 1, FB_BLOCK_REMOVABLE = 2 } fb_block_class;

/* Message of the last failed call on this thread; empty after success. */
FB_API const char* fb_last_error(void);
FB_API const char* fb_version(void);
FB_API const char* fb_status_name(fb_status s);

/* Strings returned through char** are owned by the caller. */
FB_API void fb_string_free(char* s);

/* ---- project ---- */
typedef struct fb_project fb_project;

FB_API fb_status fb_project_load(const char* path, fb_project** out);
FB_API fb_status fb_project_parse(const char* json_text, fb_project** out);
FB_API void fb_project_free(fb_project* p);

/* Overrides applied on top of the project; fields count only when has_* is set. */
typedef struct fb_run_options {
  int has_seed;
  uint64_t seed;
  int has_epochs;
  int epochs;
  int has_resolution;
  int resolution;
  int has_delta_variant;
  fb_delta_variant delta_variant;
  int has_range;
  double range_lo;
  double range_hi;
  int has_bins;
  int bins;
} fb_run_options;

FB_API void fb_run_options_init(fb_run_options* o);

/* ---- commands: every product is returned as text ---- */
FB_API fb_status fb_kbt_analyze(const fb_project* p, char** out_csv);
FB_API fb_status fb_kbt_volume(const fb_project* p, char** out_csv);
FB_API fb_status fb_fuzzy_pbr(const fb_project* p, const fb_run_options* o, fb_format f, char** out);
FB_API fb_status fb_geom_eval(const fb_project* p, fb_format f, char** out);
FB_API fb_status fb_surrogate_gen(const fb_project* p, const fb_run_options* o, char** out_csv);
/* project may be NULL (defaults). out_report: one-line summary, may be NULL. */
FB_API fb_status fb_surrogate_train(const fb_project* p, const fb_run_options* o, const char* dataset_csv,
                                    char** out_model_json, char** out_report);
/* Writes text atomically (temporary file + rename). */
FB_API fb_status fb_write_file(const char* path, const char* data, size_t len);

/* ---- surrogate model ---- */
typedef struct fb_model fb_model;

FB_API fb_status fb_model_load(const char* path, fb_model** out);
FB_API fb_status fb_model_parse(const char* json_text, fb_model** out);
FB_API void fb_model_free(fb_model* m);
FB_API size_t fb_model_input_count(const fb_model* m);
/* Raw-unit inputs in the model's input order; de-normalized S.F. */
FB_API fb_status fb_model_predict(const fb_model* m, const double* inputs, size_t n, double* out_sf);
FB_API fb_status fb_surrogate_predict(const fb_model* m, const char* dataset_csv, char** out_csv);
/* project may be NULL; it supplies the section outline and the S.F cap of the SVG. */
FB_API fb_status fb_surrogate_map(const fb_model* m, const fb_project* p, const fb_run_options* o, fb_format f,
                                  char** out);
FB_API fb_status fb_plot(const char* csv_text, const fb_project* p, char** out_svg);

/* ---- numeric primitives ---- */
/* Trapezoids are double[4] = {a1, a2, a3, a4}. */
FB_API fb_status fb_membership(const double t[4], double x, double* out);
FB_API fb_status fb_alpha_cut(const double t[4], double alpha, double* lo, double* hi);
FB_API fb_status fb_exceedance(const double b[4], const double r[4], fb_delta_variant v, double* out);
/* Upward unit normal, x = east, y = north, z = up. */
FB_API fb_status fb_normal(double dip, double dip_direction, double out[3]);
/* normals: n rows of 3 unit components, system n_i . v >= 0. witness may be NULL. */
FB_API fb_status fb_pyramid_nonempty(const double* normals, size_t n, int* nonempty, double witness[3]);
/* code: one U/L letter per project joint. */
FB_API fb_status fb_classify(const fb_project* p, int facet, const char* code, fb_block_class* out);

#ifdef __cplusplus
}
#endif

#endif
