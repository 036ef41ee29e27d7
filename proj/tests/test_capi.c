/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "fuzzyblock/fuzzyblock.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static size_t count_lines(const char* s) {
  size_t n = 0;
  for (; *s; ++s) n += (*s == '\n');
  return n;
}

int main(void) {
  const double t[4] = {0, 1, 2, 3};
  double v = -1, lo = 0, hi = 0;
  EXPECT(fb_membership(t, 0.5, &v) == FB_OK && fabs(v - 0.5) < 1e-15);
  EXPECT(fb_alpha_cut(t, 0.5, &lo, &hi) == FB_OK && lo == 0.5 && hi == 2.5);
  EXPECT(fb_alpha_cut(t, 2.0, &lo, &hi) == FB_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(fb_last_error()) > 0);
  EXPECT(fb_membership(t, 1.5, &v) == FB_OK && strlen(fb_last_error()) == 0);

  const double b[4] = {0, 1, 2, 4}, r[4] = {1, 2, 3, 5};
  EXPECT(fb_exceedance(b, r, FB_DELTA_PAPER, &v) == FB_OK && fabs(v - 1.0 / 3.0) < 1e-15);
  EXPECT(fb_exceedance(b, r, FB_DELTA_STANDARD, &v) == FB_OK && fabs(v - 0.25) < 1e-15);
  const double bad[4] = {3, 2, 1, 0};
  EXPECT(fb_exceedance(bad, r, FB_DELTA_PAPER, &v) == FB_ERR_INVALID_ARGUMENT);

  double n[3];
  EXPECT(fb_normal(90, 90, n) == FB_OK && fabs(n[0] - 1) < 1e-15 && fabs(n[2]) < 1e-15);
  EXPECT(fb_normal(95, 0, n) == FB_ERR_SEMANTIC);

  const double six[18] = {1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1};
  int ne = -1;
  double w[3];
  EXPECT(fb_pyramid_nonempty(six, 6, &ne, w) == FB_OK && ne == 0);
  EXPECT(fb_pyramid_nonempty(six, 1, &ne, w) == FB_OK && ne == 1 && w[0] > 0.5);

  EXPECT(strcmp(fb_status_name(FB_ERR_SCHEMA), "schema error") == 0);
  EXPECT(strlen(fb_version()) > 0);

  fb_project* p = NULL;
  EXPECT(fb_project_load(FB_TEST_DATA "/nope.json", &p) == FB_ERR_IO && p == NULL);
  EXPECT(fb_project_parse("{\"schema_version\": 1, \"frction\": 1}", &p) == FB_ERR_SCHEMA);
  EXPECT(strstr(fb_last_error(), "frction") != NULL);
  EXPECT(fb_project_parse("{", &p) == FB_ERR_PARSE);
  EXPECT(fb_project_load(FB_TEST_DATA "/tunnel_roof.json", &p) == FB_OK && p != NULL);

  char* out = NULL;
  EXPECT(fb_kbt_analyze(p, &out) == FB_OK);
  EXPECT(out && count_lines(out) == 1 + 4 * 8);
  fb_string_free(out);

  fb_block_class cls;
  EXPECT(fb_classify(p, 0, "LLL", &cls) == FB_OK);
  EXPECT(fb_classify(p, 9, "LLL", &cls) == FB_ERR_INVALID_ARGUMENT);
  EXPECT(fb_classify(p, 0, "LXL", &cls) == FB_ERR_INVALID_ARGUMENT);

  fb_run_options o;
  fb_run_options_init(&o);
  o.has_resolution = 1;
  o.resolution = 2000;
  out = NULL;
  EXPECT(fb_fuzzy_pbr(p, &o, FB_FORMAT_CSV, &out) == FB_OK && out && count_lines(out) == 1 + 32);
  fb_string_free(out);

  char* data = NULL;
  o.has_seed = 1;
  o.seed = 5;
  EXPECT(fb_surrogate_gen(p, &o, &data) == FB_OK && data && count_lines(data) == 2 + 283);

  char* model_json = NULL;
  char* report = NULL;
  o.has_epochs = 1;
  o.epochs = 3;
  EXPECT(fb_surrogate_train(p, &o, data, &model_json, &report) == FB_OK && model_json && report);
  char* junk_model = NULL;
  char* junk_report = NULL;
  EXPECT(fb_surrogate_train(NULL, &o, "not,a\n1,2\n", &junk_model, &junk_report) != FB_OK && !junk_model);

  fb_model* m = NULL;
  EXPECT(fb_model_parse(model_json, &m) == FB_OK && m);
  EXPECT(fb_model_input_count(m) == 5);
  const double in[5] = {60, 20, 20, 0, 1};
  double sf = -1;
  EXPECT(fb_model_predict(m, in, 5, &sf) == FB_OK && isfinite(sf));
  EXPECT(fb_model_predict(m, in, 4, &sf) == FB_ERR_INVALID_ARGUMENT);

  out = NULL;
  EXPECT(fb_surrogate_predict(m, data, &out) == FB_OK && out && count_lines(out) == 1 + 283);
  fb_string_free(out);
  out = NULL;
  EXPECT(fb_surrogate_map(m, p, NULL, FB_FORMAT_SVG, &out) == FB_OK && out && strstr(out, "<svg"));
  fb_string_free(out);
  out = NULL;
  EXPECT(fb_plot(data, p, &out) == FB_OK && out && strstr(out, "<svg"));
  fb_string_free(out);

  fb_model* m2 = NULL;
  EXPECT(fb_model_parse("{}", &m2) != FB_OK && m2 == NULL);

  fb_model_free(m);
  fb_string_free(model_json);
  fb_string_free(report);
  fb_string_free(data);
  fb_project_free(p);
  fb_project_free(NULL);
  fb_model_free(NULL);

  if (failures) {
    fprintf(stderr, "%d C API check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
