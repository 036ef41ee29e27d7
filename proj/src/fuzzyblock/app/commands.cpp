#include "fuzzyblock/app/commands.hpp"

#include <cmath>
#include <limits>
#include <iterator>
#include <map>
#include <numbers>

#include <fmt/format.h>

#include "fuzzyblock/anfis/model_io.hpp"
#include "fuzzyblock/app/csv.hpp"
#include "fuzzyblock/app/svg.hpp"
#include "fuzzyblock/error.hpp"
#include "fuzzyblock/parallel.hpp"

namespace fuzzyblock::app {

ProjectConfig with_overrides(ProjectConfig p, const RunOverrides& o) {
  if (o.seed) p.seed = p.dataset.seed = *o.seed;
  if (o.epochs) {
    if (*o.epochs < 1) fail(ErrorCode::InvalidArgument, "--epochs must be at least 1");
    p.anfis.epochs = *o.epochs;
  }
  if (o.resolution) {
    if (*o.resolution < 16) fail(ErrorCode::InvalidArgument, "--resolution must be at least 16");
    p.fuzzy.resolution = *o.resolution;
  }
  if (o.delta_variant) p.delta_variant = *o.delta_variant;
  if (o.range) {
    if (!(o.range->second > o.range->first)) fail(ErrorCode::InvalidArgument, "--range needs lo < hi");
    std::tie(p.anfis.range_lo, p.anfis.range_hi) = *o.range;
  }
  if (o.bins) {
    if (*o.bins < 8) fail(ErrorCode::InvalidArgument, "--bins must be at least 8");
    p.anfis.angular_bins = *o.bins;
  }
  return p;
}

namespace {

std::string sf_field(const std::optional<double>& sf) {
  if (!sf) return "";
  return std::isinf(*sf) ? "stable" : fmt_num(*sf);
}

}  // namespace

std::string kbt_analyze(const ProjectConfig& p) {
  const auto records = kbt::enumerate_tunnel_blocks(p.joints, p.require_tunnel(), p.gravity(), p.analysis);
  CsvTable t;
  t.header = {"facet", "code", "class", "mode", "sf", "volume", "angle", "note"};
  for (const auto& r : records) {
    t.rows.push_back({std::to_string(r.facet), r.code.str(), kbt::to_string(r.block_class),
                      r.mode ? r.mode->label() : "", sf_field(r.safety_factor), r.volume ? fmt_num(*r.volume) : "",
                      fmt_num(r.angle_deg), r.note});
  }
  return to_csv(t);
}

std::string kbt_volume(const ProjectConfig& p) {
  const auto& tunnel = p.require_tunnel();
  for (const auto& j : p.joints) j.validate();
  const auto box = kbt::analysis_box(tunnel, p.analysis);
  bool located = !p.joints.empty();
  for (const auto& j : p.joints) located = located && j.location.has_value();
  const std::size_t codes = std::size_t{1} << p.joints.size();
  const auto& facets = tunnel.facets();

  CsvTable t;
  t.header = {"facet", "code", "class", "key_volume", "located_volume", "note"};
  t.rows.resize(facets.size() * codes);
  parallel_for(t.rows.size(), [&](std::size_t k) {
    const auto& f = facets[k / codes];
    const auto code = kbt::BlockCode::from_index(k % codes, p.joints.size());
    std::vector<std::string> row = {std::to_string(f.index), code.str(), "", "", "", ""};
    std::vector<std::string> notes;
    try {
      const auto cls = kbt::classify_block(code, p.joints, f.inward_normal);
      row[2] = kbt::to_string(cls.block_class);
      if (cls.block_class == kbt::BlockClass::Removable) {
        try {
          row[3] = fmt_num(kbt::maximal_key_block(kbt::joint_pyramid(code, p.joints), f, box).volume);
        } catch (const Error& e) {
          notes.push_back(fmt::format("key: {}", e.what()));
        }
        if (located) {
          try {
            const std::vector<kbt::HalfSpace> face = {f.halfspace()};
            row[4] = fmt_num(kbt::block_volume(code, p.joints, face, box));
          } catch (const Error& e) {
            notes.push_back(fmt::format("located: {}", e.what()));
          }
        }
      }
    } catch (const Error& e) {
      notes.push_back(e.what());
    }
    for (std::size_t i = 0; i < notes.size(); ++i) row[5] += (i ? "; " : "") + notes[i];
    t.rows[k] = std::move(row);
  });
  return to_csv(t);
}

std::vector<PbrRow> fuzzy_pbr_rows(const ProjectConfig& p) {
  const auto& tunnel = p.require_tunnel();
  const auto joints = p.effective_fuzzy_joints();
  const std::size_t codes = std::size_t{1} << joints.size();
  const auto& facets = tunnel.facets();
  std::vector<PbrRow> rows;
  for (const auto& f : facets) {
    for (std::size_t k = 0; k < codes; ++k) {
      const auto code = kbt::BlockCode::from_index(k, joints.size());
      PbrRow row{f.index, code.str(), f.angle_deg, {}, ""};
      if (joints.empty()) {
        // JP is all of space; BP is the free-face half-space.
        row.r = {1.0, 1.0, 0.0};
      } else {
        const auto jp = fblock::fuzzy_joint_pyramid(code, joints, p.fuzzy.levels);
        const auto bp = fblock::fuzzy_block_pyramid(jp, f.inward_normal);
        row.r = fblock::removability(jp, bp, p.fuzzy.resolution, p.delta_variant);
      }
      row.label = fblock::finiteness_label(row.r.pbp, p.labels);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string fuzzy_pbr(const ProjectConfig& p, Format f) {
  const auto rows = fuzzy_pbr_rows(p);
  if (f == Format::Table) {
    std::string out = fmt::format("{:>5}  {:<10} {:>8} {:>8} {:>8} {:>8}  {}\n", "facet", "code", "angle", "PBP",
                                  "PJB-sup", "PBR", "label");
    for (const auto& r : rows) {
      out += fmt::format("{:>5}  {:<10} {:>8.2f} {:>8.4f} {:>8.4f} {:>8.4f}  {}\n", r.facet, r.code, r.angle_deg,
                         r.r.pbp, r.r.pjb_sup, r.r.pbr, r.label);
    }
    return out;
  }
  require(f == Format::Csv, "fuzzy pbr writes CSV or a table");
  CsvTable t;
  t.header = {"facet", "code", "angle", "pbp", "pjb_sup", "pbr", "label"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.facet), r.code, fmt_num(r.angle_deg), fmt_num(r.r.pbp), fmt_num(r.r.pjb_sup),
                      fmt_num(r.r.pbr), r.label});
  }
  return to_csv(t);
}

std::string geom_eval(const ProjectConfig& p, Format f) {
  if (!p.geometry.shape) fail(ErrorCode::Semantic, "project has no geometry.shape");
  const auto raster = geom::raster_membership(*p.geometry.shape, p.geometry.bbox, p.geometry.nx, p.geometry.ny,
                                              p.geometry.tol);
  if (f == Format::Svg) return heatmap_svg(raster, "fuzzy membership");
  CsvTable t;
  t.header = {"x", "y", "membership"};
  for (int j = 0; j < raster.ny; ++j) {
    for (int i = 0; i < raster.nx; ++i) {
      t.rows.push_back({fmt_num(raster.cell_x(i)), fmt_num(raster.cell_y(j)), fmt_num(raster.at(i, j))});
    }
  }
  return to_csv(t);
}

std::string dataset_csv(const std::vector<anfis::Sample>& samples, double sf_cap) {
  CsvTable t;
  t.comments.push_back(fmt::format("sf capped at {}", fmt_num(sf_cap)));
  t.header = anfis::kInputNames;
  t.header.push_back(anfis::kTargetName);
  for (const auto& s : samples) {
    std::vector<std::string> row;
    for (double v : s.inputs) row.push_back(fmt_num(v));
    row.push_back(fmt_num(s.target));
    t.rows.push_back(std::move(row));
  }
  return to_csv(t);
}

std::string surrogate_gen(const ProjectConfig& p) {
  p.require_tunnel();
  return dataset_csv(anfis::generate_dataset(p.dataset), p.dataset.sf_cap);
}

std::vector<anfis::Sample> parse_dataset_csv(const std::string& text) {
  const auto t = parse_csv(text, "dataset");
  std::vector<int> cols;
  for (const auto& n : anfis::kInputNames) cols.push_back(t.require_column(n));
  const int target = t.require_column(anfis::kTargetName);
  std::vector<anfis::Sample> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    anfis::Sample s;
    for (int c : cols) s.inputs.push_back(t.number(r, c));
    s.target = t.number(r, target);
    for (double v : s.inputs) {
      if (!std::isfinite(v)) fail(ErrorCode::Parse, fmt::format("dataset row {} has a non-finite input", r + 2));
    }
    if (!std::isfinite(s.target)) fail(ErrorCode::Parse, fmt::format("dataset row {} has a non-finite sf", r + 2));
    out.push_back(std::move(s));
  }
  if (out.empty()) fail(ErrorCode::Parse, "dataset has no rows");
  return out;
}

TrainOutput surrogate_train(const std::vector<anfis::Sample>& samples, const AnfisConfig& cfg, std::uint64_t seed) {
  std::vector<anfis::Sample> train_raw = samples, test_raw;
  if (cfg.holdout > 0.0) {
    const auto split = anfis::holdout_split(samples.size(), 1.0 - cfg.holdout, seed);
    train_raw.clear();
    for (auto i : split.train) train_raw.push_back(samples[i]);
    for (auto i : split.test) test_raw.push_back(samples[i]);
  }
  const auto nd = anfis::normalize(train_raw, cfg.range_lo, cfg.range_hi);
  const auto x = anfis::input_matrix(nd.samples);
  const auto y = anfis::target_vector(nd.samples);
  auto model = anfis::init_model(x, cfg.mfs_per_input);
  model.normalization = nd.record;
  model.medians = anfis::column_medians(train_raw);
  auto res = anfis::train(std::move(model), x, y, {cfg.epochs, cfg.learn_rate});

  TrainOutput out;
  out.model = std::move(res.model);
  out.rmse_history = std::move(res.rmse_history);
  out.report = fmt::format("samples={} rules={} epochs={} train_rmse={}", train_raw.size(), out.model.rules(),
                           cfg.epochs, fmt_num(out.rmse_history.back()));
  if (!test_raw.empty()) {
    std::vector<anfis::Sample> test_n;
    for (const auto& s : test_raw) {
      test_n.push_back({nd.record.normalize_inputs(s.inputs), nd.record.normalize_target(s.target)});
    }
    out.holdout_rmse = anfis::rmse(out.model, anfis::input_matrix(test_n), anfis::target_vector(test_n));
    out.report += fmt::format(" holdout={} holdout_rmse={}", test_raw.size(), fmt_num(*out.holdout_rmse));
  }
  return out;
}

std::string surrogate_predict(const anfis::TskModel& model, const std::string& data_csv) {
  const auto t = parse_csv(data_csv, "input");
  std::vector<int> cols;
  for (const auto& c : model.normalization.inputs) cols.push_back(t.require_column(c.name));
  const int target = t.column(anfis::kTargetName);
  CsvTable out;
  for (const auto& c : model.normalization.inputs) out.header.push_back(c.name);
  if (target >= 0) out.header.push_back(anfis::kTargetName);
  out.header.push_back("sf_pred");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::vector<double> raw;
    std::vector<std::string> row;
    for (int c : cols) {
      raw.push_back(t.number(r, c));
      row.push_back(t.rows[r][static_cast<std::size_t>(c)]);
    }
    if (target >= 0) row.push_back(t.rows[r][static_cast<std::size_t>(target)]);
    row.push_back(fmt_num(anfis::predict_raw(model, raw)));
    out.rows.push_back(std::move(row));
  }
  return to_csv(out);
}

namespace {

int angle_input(const anfis::TskModel& model) {
  for (std::size_t k = 0; k < model.normalization.inputs.size(); ++k) {
    if (model.normalization.inputs[k].name == anfis::kInputNames[anfis::kAngleInput]) return static_cast<int>(k);
  }
  fail(ErrorCode::Schema, "model has no angle_deg input");
}

std::vector<kbt::Vec2> default_section() {
  std::vector<kbt::Vec2> s;
  for (int i = 0; i < 4; ++i) {
    const double a = (45.0 + 90.0 * i) * std::numbers::pi / 180.0;
    s.emplace_back(std::sin(a), std::cos(a));
  }
  return s;
}

}  // namespace

std::string surrogate_map(const anfis::TskModel& model, int bins, Format f, const std::vector<kbt::Vec2>& section,
                          double cap) {
  if (bins < 8) fail(ErrorCode::InvalidArgument, "angular bins must be at least 8");
  const auto map = anfis::damage_map(model, bins, angle_input(model));
  if (f == Format::Svg) {
    std::vector<AngleValue> s;
    for (const auto& d : map) s.push_back({d.angle_deg, d.sf});
    return damage_ring_svg(section.empty() ? default_section() : section, s, cap, "predicted safety factor");
  }
  CsvTable t;
  t.header = {"angle_deg", "sf"};
  for (const auto& d : map) t.rows.push_back({fmt_num(d.angle_deg), fmt_num(d.sf)});
  return to_csv(t);
}

std::string plot(const std::string& csv_text, const ProjectConfig* project) {
  const auto t = parse_csv(csv_text, "plot input");
  if (t.rows.empty()) fail(ErrorCode::InvalidArgument, "nothing to plot: csv has no rows");
  const double cap = project ? project->dataset.sf_cap : 5.0;
  std::vector<kbt::Vec2> section = project && project->tunnel ? project->tunnel->section() : default_section();

  if (t.column("x") >= 0 && t.column("y") >= 0 && t.column("membership") >= 0) {
    const int cx = t.column("x"), cy = t.column("y"), cm = t.column("membership");
    std::map<double, int> xs, ys;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      xs.emplace(t.number(r, cx), 0);
      ys.emplace(t.number(r, cy), 0);
    }
    geom::Raster raster;
    raster.nx = static_cast<int>(xs.size());
    raster.ny = static_cast<int>(ys.size());
    if (static_cast<std::size_t>(raster.nx) * raster.ny != t.rows.size()) {
      fail(ErrorCode::Parse, "raster csv is not a full grid");
    }
    int i = 0;
    for (auto& [k, v] : xs) v = i++;
    i = 0;
    for (auto& [k, v] : ys) v = i++;
    const double dx = raster.nx > 1 ? (std::prev(xs.end())->first - xs.begin()->first) / (raster.nx - 1) : 1.0;
    const double dy = raster.ny > 1 ? (std::prev(ys.end())->first - ys.begin()->first) / (raster.ny - 1) : 1.0;
    raster.bbox = {xs.begin()->first - dx / 2, ys.begin()->first - dy / 2, std::prev(xs.end())->first + dx / 2,
                   std::prev(ys.end())->first + dy / 2};
    raster.values.assign(t.rows.size(), 0.0);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      raster.values[static_cast<std::size_t>(ys[t.number(r, cy)]) * raster.nx + xs[t.number(r, cx)]] = t.number(r, cm);
    }
    return heatmap_svg(raster, "fuzzy membership");
  }

  if (t.column("angle_deg") >= 0 && t.column("sf") >= 0 && t.header.size() == 2) {
    std::vector<AngleValue> s;
    for (std::size_t r = 0; r < t.rows.size(); ++r) s.push_back({t.number(r, 0), t.number(r, 1)});
    return damage_ring_svg(section, s, cap, "predicted safety factor");
  }

  if (t.column("facet") >= 0 && t.column("class") >= 0 && t.column("sf") >= 0 && t.column("angle") >= 0) {
    // Crisp kernel damage map: lowest S.F of the removable blocks per facet.
    const int cf = t.column("facet"), cc = t.column("class"), cs = t.column("sf"), ca = t.column("angle");
    std::map<int, AngleValue> per_facet;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const int f = static_cast<int>(t.number(r, cf));
      auto [it, fresh] = per_facet.emplace(f, AngleValue{t.number(r, ca), INFINITY});
      (void)fresh;
      if (t.rows[r][static_cast<std::size_t>(cc)] == "removable" && !t.rows[r][static_cast<std::size_t>(cs)].empty()) {
        it->second.value = std::min(it->second.value, t.number(r, cs));
      }
    }
    std::vector<AngleValue> s;
    for (const auto& [f, v] : per_facet) s.push_back(v);
    return damage_ring_svg(section, s, cap, "block safety factor by facet");
  }

  std::vector<int> numeric;
  for (std::size_t c = 0; c < t.header.size() && numeric.size() < 2; ++c) {
    bool ok = true;
    for (std::size_t r = 0; r < t.rows.size() && ok; ++r) {
      try {
        (void)t.number(r, static_cast<int>(c));
      } catch (const Error&) {
        ok = false;
      }
    }
    if (ok) numeric.push_back(static_cast<int>(c));
  }
  if (numeric.size() < 2) fail(ErrorCode::InvalidArgument, "plot needs at least two numeric columns");
  // Datasets and predictions plot the target against position.
  int xc = numeric[0], yc = numeric[1];
  if (t.column("angle_deg") >= 0 && (t.column("sf_pred") >= 0 || t.column("sf") >= 0)) {
    xc = t.column("angle_deg");
    yc = t.column("sf_pred") >= 0 ? t.column("sf_pred") : t.column("sf");
  }
  std::vector<double> x, y;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    x.push_back(t.number(r, xc));
    y.push_back(t.number(r, yc));
  }
  return scatter_svg(x, y, t.header[static_cast<std::size_t>(xc)], t.header[static_cast<std::size_t>(yc)],
                     "csv plot");
}

}  // namespace fuzzyblock::app
