#include "fuzzyblock/app/project.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "fuzzyblock/app/io.hpp"
#include "fuzzyblock/error.hpp"

namespace fuzzyblock::app {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  fail(ErrorCode::Schema, fmt::format("{}: {}", path, msg));
}
[[noreturn]] void semantic(const std::string& path, const std::string& msg) {
  fail(ErrorCode::Semantic, fmt::format("{}: {}", path, msg));
}

// Runs a validation and re-raises its semantic failure under the key path.
template <class F>
void at_path(const std::string& path, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Semantic || e.code() == ErrorCode::InvalidArgument) semantic(path, e.what());
    throw;
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<int>();
}

std::vector<double> as_numbers(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_array() || j.size() != n) schema(path, fmt::format("expected an array of {} numbers", n));
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(as_number(j[i], index(path, i)));
  return out;
}

// A fuzzy quantity: a number (crisp) or [a1, a2, a3, a4].
fuzzy::TrapezoidalNumber as_trapezoid(const json& j, const std::string& path) {
  if (j.is_number()) return fuzzy::TrapezoidalNumber::crisp(j.get<double>());
  const auto v = as_numbers(j, path, 4);
  fuzzy::TrapezoidalNumber t;
  at_path(path, [&] { t = fuzzy::TrapezoidalNumber(v[0], v[1], v[2], v[3]); });
  return t;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1])});
      diag = up;
    }
  }
  return row[b.size()];
}

// Object view that records which keys were read; finish() rejects the rest.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& at(const char* key) {
    if (!has(key)) {
      // a misspelt key is the usual reason for a missing one
      for (const auto& [k, v] : j_.items()) {
        if (!seen_.count(k) && edit_distance(k, key) <= 2)
          schema(join(path_, k), fmt::format("unknown key (did you mean \"{}\"?)", key));
      }
      schema(join(path_, key), "required key is missing");
    }
    return j_.at(key);
  }
  std::string path(const char* key) const { return join(path_, key); }

  double number(const char* key, double def) { return has(key) ? as_number(j_.at(key), path(key)) : def; }
  int integer(const char* key, int def) { return has(key) ? as_int(j_.at(key), path(key)) : def; }
  std::string string(const char* key) {
    const json& v = at(key);
    if (!v.is_string()) schema(path(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) schema(join(path_, k), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::pair<double, double> as_range(const json& j, const std::string& path) {
  const auto v = as_numbers(j, path, 2);
  if (!(v[1] > v[0])) semantic(path, fmt::format("range [{}, {}] is empty", v[0], v[1]));
  return {v[0], v[1]};
}

kbt::TunnelSection parse_tunnel(const json& j, const std::string& path) {
  Obj o(j, path);
  const json& sec = o.at("section");
  if (!sec.is_array()) schema(o.path("section"), "expected an array of [s, z] vertices");
  std::vector<kbt::Vec2> pts;
  for (std::size_t i = 0; i < sec.size(); ++i) {
    const auto v = as_numbers(sec[i], index(o.path("section"), i), 2);
    pts.emplace_back(v[0], v[1]);
  }
  const double trend = o.number("axis_trend_deg", 0.0);
  const double plunge = o.number("axis_plunge_deg", 0.0);
  o.finish();
  std::optional<kbt::TunnelSection> t;
  at_path(path, [&] { t.emplace(std::move(pts), trend, plunge); });
  return *t;
}

kbt::JointPlane parse_joint(const json& j, const std::string& path) {
  Obj o(j, path);
  kbt::JointPlane jp;
  jp.id = o.string("id");
  jp.orientation.dip = as_number(o.at("dip"), o.path("dip"));
  jp.orientation.dip_direction = as_number(o.at("dip_direction"), o.path("dip_direction"));
  jp.friction_deg = as_number(o.at("friction"), o.path("friction"));
  if (o.has("location")) {
    const auto v = as_numbers(j.at("location"), o.path("location"), 3);
    jp.location = kbt::Vec3(v[0], v[1], v[2]);
  }
  o.finish();
  at_path(path, [&] { jp.validate(); });
  return jp;
}

fblock::FuzzyJoint parse_fuzzy_joint(const json& j, const std::string& path) {
  Obj o(j, path);
  fblock::FuzzyJoint fj;
  fj.id = o.string("id");
  fj.orientation.dip = as_trapezoid(o.at("dip"), o.path("dip"));
  fj.orientation.dip_direction = as_trapezoid(o.at("dip_direction"), o.path("dip_direction"));
  fj.friction_deg = as_trapezoid(o.at("friction"), o.path("friction"));
  o.finish();
  at_path(path, [&] { fj.orientation.validate(); });
  if (fj.friction_deg.a1() < 0.0 || fj.friction_deg.a4() >= 90.0) {
    semantic(path + ".friction", "friction support must lie inside [0, 90)");
  }
  return fj;
}

fuzzy::TrapezoidalNumber trap_key(Obj& o, const char* key) { return as_trapezoid(o.at(key), o.path(key)); }

geom::FuzzyPoint parse_point(const json& j, const std::string& path) {
  Obj o(j, path);
  geom::FuzzyPoint p{trap_key(o, "x"), trap_key(o, "y")};
  o.finish();
  return p;
}

geom::Shape parse_shape(const json& j, const std::string& path) {
  Obj o(j, path);
  const std::string type = o.string("type");
  std::optional<geom::Shape> shape;
  if (type == "line") {
    auto a = trap_key(o, "a"), b = trap_key(o, "b"), c = trap_key(o, "c");
    at_path(path, [&] { shape.emplace(geom::FuzzyLineImplicit(a, b, c)); });
  } else if (type == "slope_line") {
    shape.emplace(geom::FuzzyLineSlope{trap_key(o, "m"), trap_key(o, "b")});
  } else if (type == "segment") {
    shape.emplace(geom::FuzzySegment{parse_point(o.at("p"), o.path("p")), parse_point(o.at("q"), o.path("q"))});
  } else if (type == "polygon") {
    const json& vs = o.at("vertices");
    if (!vs.is_array()) schema(o.path("vertices"), "expected an array of points");
    std::vector<geom::FuzzyPoint> pts;
    for (std::size_t i = 0; i < vs.size(); ++i) pts.push_back(parse_point(vs[i], index(o.path("vertices"), i)));
    at_path(o.path("vertices"), [&] { shape.emplace(geom::FuzzyPolygon(std::move(pts))); });
  } else {
    schema(o.path("type"), "expected one of line, slope_line, segment, polygon; got '" + type + "'");
  }
  o.finish();
  return *shape;
}

void parse_geometry(const json& j, GeometryConfig& g) {
  Obj o(j, "geometry");
  if (o.has("shape")) g.shape = parse_shape(j.at("shape"), o.path("shape"));
  if (o.has("bbox")) {
    const auto v = as_numbers(j.at("bbox"), o.path("bbox"), 4);
    if (!(v[2] > v[0] && v[3] > v[1])) semantic(o.path("bbox"), "expected [xmin, ymin, xmax, ymax] with positive extent");
    g.bbox = {v[0], v[1], v[2], v[3]};
  }
  g.nx = o.integer("nx", g.nx);
  g.ny = o.integer("ny", g.ny);
  g.tol = o.number("tol", g.tol);
  o.finish();
  if (g.nx < 2 || g.ny < 2) semantic("geometry", "nx and ny must be at least 2");
  if (!(g.tol > 0.0)) semantic(o.path("tol"), "must be positive");
}

void parse_dataset(const json& j, anfis::DatasetSpec& d, bool& seed_given) {
  Obj o(j, "dataset");
  d.sample_count = o.integer("sample_count", d.sample_count);
  if (o.has("seed")) {
    if (!j.at("seed").is_number_unsigned()) schema(o.path("seed"), "expected a non-negative integer");
    d.seed = j.at("seed").get<std::uint64_t>();
    seed_given = true;
  }
  d.sf_cap = o.number("sf_cap", d.sf_cap);
  d.max_retries = o.integer("max_retries", d.max_retries);
  if (o.has("ranges")) {
    Obj r(j.at("ranges"), o.path("ranges"));
    auto range = [&](const char* key, anfis::VarRange& out) {
      if (!r.has(key)) return;
      const auto [lo, hi] = as_range(j.at("ranges").at(key), r.path(key));
      out = {lo, hi};
    };
    range("dip", d.dip);
    range("dip_direction", d.dip_direction);
    range("friction", d.friction);
    range("position_angle", d.position_angle);
    r.finish();
  }
  o.finish();
  if (d.sample_count < 1) semantic(o.path("sample_count"), "must be at least 1");
  if (d.max_retries < 0) semantic(o.path("max_retries"), "must be non-negative");
  if (!(d.sf_cap > 0.0)) semantic(o.path("sf_cap"), "must be positive");
}

void parse_anfis(const json& j, AnfisConfig& a) {
  Obj o(j, "anfis");
  if (o.has("mfs_per_input")) {
    const json& m = j.at("mfs_per_input");
    if (m.is_number_integer()) {
      a.mfs_per_input.assign(anfis::kInputNames.size(), m.get<int>());
    } else if (m.is_array() && m.size() == anfis::kInputNames.size()) {
      a.mfs_per_input.clear();
      for (std::size_t i = 0; i < m.size(); ++i) a.mfs_per_input.push_back(as_int(m[i], index(o.path("mfs_per_input"), i)));
    } else {
      schema(o.path("mfs_per_input"), fmt::format("expected an integer or an array of {}", anfis::kInputNames.size()));
    }
  }
  a.epochs = o.integer("epochs", a.epochs);
  a.learn_rate = o.number("learn_rate", a.learn_rate);
  if (o.has("range")) std::tie(a.range_lo, a.range_hi) = as_range(j.at("range"), o.path("range"));
  a.angular_bins = o.integer("angular_bins", a.angular_bins);
  a.holdout = o.number("holdout", a.holdout);
  o.finish();
  std::size_t rules = 1;
  for (int m : a.mfs_per_input) {
    if (m < 2) semantic(o.path("mfs_per_input"), "each input needs at least 2 membership functions");
    rules *= static_cast<std::size_t>(m);
  }
  if (rules > 1024) semantic(o.path("mfs_per_input"), fmt::format("{} rules exceed the limit of 1024", rules));
  if (a.epochs < 1) semantic(o.path("epochs"), "must be at least 1");
  if (!(a.learn_rate > 0.0)) semantic(o.path("learn_rate"), "must be positive");
  if (a.angular_bins < 8) semantic(o.path("angular_bins"), "must be at least 8");
  if (!(a.holdout >= 0.0 && a.holdout < 1.0)) semantic(o.path("holdout"), "must lie in [0, 1)");
}

}  // namespace

const kbt::TunnelSection& ProjectConfig::require_tunnel() const {
  if (!tunnel) fail(ErrorCode::Semantic, "project has no tunnel");
  return *tunnel;
}

std::vector<fblock::FuzzyJoint> ProjectConfig::effective_fuzzy_joints() const {
  if (!fuzzy_joints.empty()) return fuzzy_joints;
  std::vector<fblock::FuzzyJoint> out;
  for (const auto& j : joints) {
    out.push_back({j.id, fblock::FuzzyOrientation::crisp(j.orientation), fuzzy::TrapezoidalNumber::crisp(j.friction_deg)});
  }
  return out;
}

ProjectConfig parse_project_text(const std::string& text, const std::string& label) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, fmt::format("{}: syntax error: {}", label, e.what()));
  }
  ProjectConfig p;
  try {
    Obj o(root, "");
    p.schema_version = as_int(o.at("schema_version"), "schema_version");
    if (p.schema_version != kProjectSchemaVersion) {
      schema("schema_version", fmt::format("unsupported version {} (expected {})", p.schema_version, kProjectSchemaVersion));
    }
    if (o.has("tunnel")) p.tunnel = parse_tunnel(root.at("tunnel"), "tunnel");
    p.unit_weight = o.number("unit_weight", p.unit_weight);
    if (!(p.unit_weight > 0.0)) semantic("unit_weight", "must be positive");

    std::set<std::string> ids;
    if (o.has("joints")) {
      const json& js = root.at("joints");
      if (!js.is_array()) schema("joints", "expected an array");
      for (std::size_t i = 0; i < js.size(); ++i) {
        p.joints.push_back(parse_joint(js[i], index("joints", i)));
        if (!ids.insert(p.joints.back().id).second) semantic(index("joints", i) + ".id", "duplicate id '" + p.joints.back().id + "'");
      }
      if (p.joints.size() > 8) semantic("joints", "at most 8 joints are supported");
    }
    ids.clear();
    if (o.has("fuzzy_joints")) {
      const json& js = root.at("fuzzy_joints");
      if (!js.is_array()) schema("fuzzy_joints", "expected an array");
      for (std::size_t i = 0; i < js.size(); ++i) {
        p.fuzzy_joints.push_back(parse_fuzzy_joint(js[i], index("fuzzy_joints", i)));
        if (!ids.insert(p.fuzzy_joints.back().id).second) {
          semantic(index("fuzzy_joints", i) + ".id", "duplicate id '" + p.fuzzy_joints.back().id + "'");
        }
      }
      if (p.fuzzy_joints.size() > 8) semantic("fuzzy_joints", "at most 8 joints are supported");
    }
    if (o.has("analysis")) {
      Obj a(root.at("analysis"), "analysis");
      p.analysis.box_scale = a.number("box_scale", p.analysis.box_scale);
      a.finish();
      if (!(p.analysis.box_scale > 0.0)) semantic("analysis.box_scale", "must be positive");
    }
    if (o.has("seed")) {
      if (!root.at("seed").is_number_unsigned()) schema("seed", "expected a non-negative integer");
      p.seed = root.at("seed").get<std::uint64_t>();
    }
    bool dataset_seed = false;
    if (o.has("dataset")) parse_dataset(root.at("dataset"), p.dataset, dataset_seed);
    if (!dataset_seed) p.dataset.seed = p.seed;
    if (o.has("anfis")) parse_anfis(root.at("anfis"), p.anfis);
    if (o.has("fuzzy")) {
      Obj f(root.at("fuzzy"), "fuzzy");
      p.fuzzy.resolution = f.integer("resolution", p.fuzzy.resolution);
      p.fuzzy.levels = f.integer("levels", p.fuzzy.levels);
      f.finish();
      if (p.fuzzy.resolution < 16) semantic("fuzzy.resolution", "must be at least 16");
      if (p.fuzzy.levels < 2) semantic("fuzzy.levels", "must be at least 2");
    }
    if (o.has("delta_variant")) {
      const std::string v = o.string("delta_variant");
      at_path("delta_variant", [&] { p.delta_variant = fuzzy::parse_delta_variant(v); });
    }
    if (o.has("label_thresholds")) {
      Obj l(root.at("label_thresholds"), "label_thresholds");
      p.labels.finite = l.number("finite", p.labels.finite);
      p.labels.quasi_finite = l.number("quasi_finite", p.labels.quasi_finite);
      p.labels.not_so_very_finite = l.number("not_so_very_finite", p.labels.not_so_very_finite);
      l.finish();
      at_path("label_thresholds", [&] { p.labels.validate(); });
    }
    if (o.has("geometry")) parse_geometry(root.at("geometry"), p.geometry);
    o.finish();
  } catch (const json::exception& e) {
    fail(ErrorCode::Schema, fmt::format("{}: {}", label, e.what()));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema || e.code() == ErrorCode::Semantic) {
      fail(e.code(), fmt::format("{}: {}: {}", label, e.code() == ErrorCode::Schema ? "schema" : "invalid value", e.what()));
    }
    throw;
  }

  if (p.tunnel) p.dataset.tunnel = *p.tunnel;
  p.dataset.joints = p.joints;
  p.dataset.unit_weight = p.unit_weight;
  p.dataset.analysis = p.analysis;
  return p;
}

ProjectConfig load_project(const std::string& path) { return parse_project_text(read_file(path), path); }

}  // namespace fuzzyblock::app
