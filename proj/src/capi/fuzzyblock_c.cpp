#include "fuzzyblock/fuzzyblock.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "fuzzyblock/anfis/model_io.hpp"
#include "fuzzyblock/app/commands.hpp"
#include "fuzzyblock/app/io.hpp"
#include "fuzzyblock/error.hpp"

struct fb_project {
  fuzzyblock::app::ProjectConfig config;
};

struct fb_model {
  fuzzyblock::anfis::TskModel model;
};

namespace {

using fuzzyblock::Error;
using fuzzyblock::ErrorCode;
namespace app = fuzzyblock::app;

thread_local std::string g_last_error;

fb_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return FB_ERR_INVALID_ARGUMENT;
    case ErrorCode::Io: return FB_ERR_IO;
    case ErrorCode::Parse: return FB_ERR_PARSE;
    case ErrorCode::Schema: return FB_ERR_SCHEMA;
    case ErrorCode::Semantic: return FB_ERR_SEMANTIC;
    case ErrorCode::Numeric: return FB_ERR_NUMERIC;
    case ErrorCode::ModeInconsistency: return FB_ERR_MODE_INCONSISTENCY;
    case ErrorCode::Unbounded: return FB_ERR_UNBOUNDED;
  }
  return FB_ERR_INTERNAL;
}

template <class F>
fb_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return FB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FB_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) fuzzyblock::fail(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

app::RunOverrides overrides(const fb_run_options* o) {
  app::RunOverrides r;
  if (!o) return r;
  if (o->has_seed) r.seed = o->seed;
  if (o->has_epochs) r.epochs = o->epochs;
  if (o->has_resolution) r.resolution = o->resolution;
  if (o->has_delta_variant) {
    r.delta_variant = o->delta_variant == FB_DELTA_STANDARD ? fuzzyblock::fuzzy::DeltaVariant::Standard
                                                            : fuzzyblock::fuzzy::DeltaVariant::Paper;
  }
  if (o->has_range) r.range = std::pair{o->range_lo, o->range_hi};
  if (o->has_bins) r.bins = o->bins;
  return r;
}

app::Format format(fb_format f) {
  switch (f) {
    case FB_FORMAT_CSV: return app::Format::Csv;
    case FB_FORMAT_TABLE: return app::Format::Table;
    case FB_FORMAT_SVG: return app::Format::Svg;
  }
  fuzzyblock::fail(ErrorCode::InvalidArgument, "unknown output format");
}

fuzzyblock::fuzzy::TrapezoidalNumber trap(const double t[4]) {
  need(t, "trapezoid");
  return {t[0], t[1], t[2], t[3]};
}

}  // namespace

extern "C" {

const char* fb_last_error(void) { return g_last_error.c_str(); }
const char* fb_version(void) { return "1.0.0"; }

const char* fb_status_name(fb_status s) {
  switch (s) {
    case FB_OK: return "ok";
    case FB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FB_ERR_IO: return "io error";
    case FB_ERR_PARSE: return "parse error";
    case FB_ERR_SCHEMA: return "schema error";
    case FB_ERR_SEMANTIC: return "semantic error";
    case FB_ERR_NUMERIC: return "numeric error";
    case FB_ERR_MODE_INCONSISTENCY: return "mode inconsistency";
    case FB_ERR_UNBOUNDED: return "unbounded block";
    case FB_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

void fb_string_free(char* s) { std::free(s); }

fb_status fb_project_load(const char* path, fb_project** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new fb_project{app::load_project(path)};
  });
}

fb_status fb_project_parse(const char* json_text, fb_project** out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    *out = new fb_project{app::parse_project_text(json_text)};
  });
}

void fb_project_free(fb_project* p) { delete p; }

void fb_run_options_init(fb_run_options* o) {
  if (o) *o = fb_run_options{};
}

fb_status fb_kbt_analyze(const fb_project* p, char** out_csv) {
  return guarded([&] {
    need(p, "project");
    need(out_csv, "out_csv");
    *out_csv = dup(app::kbt_analyze(p->config));
  });
}

fb_status fb_kbt_volume(const fb_project* p, char** out_csv) {
  return guarded([&] {
    need(p, "project");
    need(out_csv, "out_csv");
    *out_csv = dup(app::kbt_volume(p->config));
  });
}

fb_status fb_fuzzy_pbr(const fb_project* p, const fb_run_options* o, fb_format f, char** out) {
  return guarded([&] {
    need(p, "project");
    need(out, "out");
    *out = dup(app::fuzzy_pbr(app::with_overrides(p->config, overrides(o)), format(f)));
  });
}

fb_status fb_geom_eval(const fb_project* p, fb_format f, char** out) {
  return guarded([&] {
    need(p, "project");
    need(out, "out");
    *out = dup(app::geom_eval(p->config, format(f)));
  });
}

fb_status fb_surrogate_gen(const fb_project* p, const fb_run_options* o, char** out_csv) {
  return guarded([&] {
    need(p, "project");
    need(out_csv, "out_csv");
    *out_csv = dup(app::surrogate_gen(app::with_overrides(p->config, overrides(o))));
  });
}

fb_status fb_surrogate_train(const fb_project* p, const fb_run_options* o, const char* dataset_csv,
                             char** out_model_json, char** out_report) {
  return guarded([&] {
    need(dataset_csv, "dataset_csv");
    need(out_model_json, "out_model_json");
    const auto cfg = app::with_overrides(p ? p->config : app::ProjectConfig{}, overrides(o));
    const auto res = app::surrogate_train(app::parse_dataset_csv(dataset_csv), cfg.anfis, cfg.seed);
    const std::string json = fuzzyblock::anfis::model_to_json(res.model, res.rmse_history);
    char* model = dup(json);
    if (out_report) {
      try {
        *out_report = dup(res.report);
      } catch (...) {
        std::free(model);
        throw;
      }
    }
    *out_model_json = model;
  });
}

fb_status fb_write_file(const char* path, const char* data, size_t len) {
  return guarded([&] {
    need(path, "path");
    if (len) need(data, "data");
    app::write_file_atomic(path, std::string_view(data ? data : "", len));
  });
}

fb_status fb_model_load(const char* path, fb_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new fb_model{fuzzyblock::anfis::model_from_json(app::read_file(path))};
  });
}

fb_status fb_model_parse(const char* json_text, fb_model** out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    *out = new fb_model{fuzzyblock::anfis::model_from_json(json_text)};
  });
}

void fb_model_free(fb_model* m) { delete m; }

size_t fb_model_input_count(const fb_model* m) { return m ? m->model.inputs() : 0; }

fb_status fb_model_predict(const fb_model* m, const double* inputs, size_t n, double* out_sf) {
  return guarded([&] {
    need(m, "model");
    need(inputs, "inputs");
    need(out_sf, "out_sf");
    if (n != m->model.inputs()) fuzzyblock::fail(ErrorCode::InvalidArgument, "input count does not match the model");
    *out_sf = fuzzyblock::anfis::predict_raw(m->model, std::vector<double>(inputs, inputs + n));
  });
}

fb_status fb_surrogate_predict(const fb_model* m, const char* dataset_csv, char** out_csv) {
  return guarded([&] {
    need(m, "model");
    need(dataset_csv, "dataset_csv");
    need(out_csv, "out_csv");
    *out_csv = dup(app::surrogate_predict(m->model, dataset_csv));
  });
}

fb_status fb_surrogate_map(const fb_model* m, const fb_project* p, const fb_run_options* o, fb_format f, char** out) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    const auto cfg = app::with_overrides(p ? p->config : app::ProjectConfig{}, overrides(o));
    std::vector<fuzzyblock::kbt::Vec2> section;
    if (cfg.tunnel) section = cfg.tunnel->section();
    *out = dup(app::surrogate_map(m->model, cfg.anfis.angular_bins, format(f), section, cfg.dataset.sf_cap));
  });
}

fb_status fb_plot(const char* csv_text, const fb_project* p, char** out_svg) {
  return guarded([&] {
    need(csv_text, "csv_text");
    need(out_svg, "out_svg");
    *out_svg = dup(app::plot(csv_text, p ? &p->config : nullptr));
  });
}

fb_status fb_membership(const double t[4], double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = fuzzyblock::fuzzy::membership(trap(t), x);
  });
}

fb_status fb_alpha_cut(const double t[4], double alpha, double* lo, double* hi) {
  return guarded([&] {
    need(lo, "lo");
    need(hi, "hi");
    const auto c = fuzzyblock::fuzzy::alpha_cut(trap(t), alpha);
    *lo = c.lo;
    *hi = c.hi;
  });
}

fb_status fb_exceedance(const double b[4], const double r[4], fb_delta_variant v, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = fuzzyblock::fuzzy::exceedance_poss(trap(b), trap(r),
                                              v == FB_DELTA_STANDARD ? fuzzyblock::fuzzy::DeltaVariant::Standard
                                                                     : fuzzyblock::fuzzy::DeltaVariant::Paper);
  });
}

fb_status fb_normal(double dip, double dip_direction, double out[3]) {
  return guarded([&] {
    need(out, "out");
    const fuzzyblock::kbt::Orientation o{dip, dip_direction};
    o.validate();
    const auto n = fuzzyblock::kbt::normal_from_orientation(o);
    for (int k = 0; k < 3; ++k) out[k] = n[k];
  });
}

fb_status fb_pyramid_nonempty(const double* normals, size_t n, int* nonempty, double witness[3]) {
  return guarded([&] {
    need(normals, "normals");
    need(nonempty, "nonempty");
    std::vector<fuzzyblock::kbt::Vec3> ns;
    for (size_t i = 0; i < n; ++i) ns.emplace_back(normals[3 * i], normals[3 * i + 1], normals[3 * i + 2]);
    const auto r = fuzzyblock::kbt::pyramid_nonempty(fuzzyblock::kbt::HalfSpaceSystem(ns));
    *nonempty = r.nonempty ? 1 : 0;
    if (witness) {
      for (int k = 0; k < 3; ++k) witness[k] = r.witness ? (*r.witness)[k] : 0.0;
    }
  });
}

fb_status fb_classify(const fb_project* p, int facet, const char* code, fb_block_class* out) {
  return guarded([&] {
    need(p, "project");
    need(code, "code");
    need(out, "out");
    const auto& facets = p->config.require_tunnel().facets();
    if (facet < 0 || static_cast<std::size_t>(facet) >= facets.size()) {
      fuzzyblock::fail(ErrorCode::InvalidArgument, "facet index out of range");
    }
    const auto c = fuzzyblock::kbt::BlockCode::parse(code);
    const auto cls = fuzzyblock::kbt::classify_block(c, p->config.joints, facets[static_cast<std::size_t>(facet)].inward_normal);
    switch (cls.block_class) {
      case fuzzyblock::kbt::BlockClass::Infinite: *out = FB_BLOCK_INFINITE; break;
      case fuzzyblock::kbt::BlockClass::Tapered: *out = FB_BLOCK_TAPERED; break;
      case fuzzyblock::kbt::BlockClass::Removable: *out = FB_BLOCK_REMOVABLE; break;
    }
  });
}

}  // extern "C"
