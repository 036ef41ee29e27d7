// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fuzzyblock/fuzzyblock.h"

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;

struct Failure {
  int code;
  std::string message;
};

void check(fb_status s) {
  if (s != FB_OK) throw Failure{kDataError, std::string(fb_status_name(s)) + ": " + fb_last_error()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kDataError, "io error: cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { fb_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using Project = std::unique_ptr<fb_project, decltype(&fb_project_free)>;
using Model = std::unique_ptr<fb_model, decltype(&fb_model_free)>;

Project load_project(const std::string& path) {
  fb_project* p = nullptr;
  check(fb_project_load(path.c_str(), &p));
  return Project(p, fb_project_free);
}

Model load_model(const std::string& path) {
  fb_model* m = nullptr;
  check(fb_model_load(path.c_str(), &m));
  return Model(m, fb_model_free);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  check(fb_write_file(out_path.c_str(), text.data(), text.size()));
}

struct Options {
  std::string project, out, data, model, input, format;
  std::uint64_t seed = 0;
  int epochs = 0, resolution = 0, bins = 0;
  std::string delta_variant;
  std::vector<double> range;
};

fb_run_options run_options(const CLI::App& cmd, const Options& o) {
  fb_run_options r;
  fb_run_options_init(&r);
  auto given = [&](const char* name) {
    try {
      return cmd.get_option(name)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  if (given("--seed")) {
    r.has_seed = 1;
    r.seed = o.seed;
  }
  if (given("--epochs")) {
    r.has_epochs = 1;
    r.epochs = o.epochs;
  }
  if (given("--resolution")) {
    r.has_resolution = 1;
    r.resolution = o.resolution;
  }
  if (given("--delta-variant")) {
    r.has_delta_variant = 1;
    r.delta_variant = o.delta_variant == "standard" ? FB_DELTA_STANDARD : FB_DELTA_PAPER;
  }
  if (given("--range")) {
    if (o.range.size() != 2 || !(o.range[1] > o.range[0])) throw Failure{kUsage, "--range expects lo,hi with lo < hi"};
    r.has_range = 1;
    r.range_lo = o.range[0];
    r.range_hi = o.range[1];
  }
  if (given("--bins")) {
    r.has_bins = 1;
    r.bins = o.bins;
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-block and fuzzy removability analysis around tunnels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fb_version());
  Options o;

  auto project_opt = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("-p,--project", o.project, "project file (JSON)");
    if (required) opt->required();
  };
  auto out_opt = [&](CLI::App* c) { c->add_option("-o,--out", o.out, "output file (default: stdout)"); };
  auto seed_opt = [&](CLI::App* c) { c->add_option("--seed", o.seed, "64-bit seed"); };

  auto* kbt = app.add_subcommand("kbt", "crisp key-block analysis")->require_subcommand(1);
  auto* kbt_analyze = kbt->add_subcommand("analyze", "block records for every facet and code");
  project_opt(kbt_analyze, true);
  out_opt(kbt_analyze);
  auto* kbt_volume = kbt->add_subcommand("volume", "volumes of removable blocks");
  project_opt(kbt_volume, true);
  out_opt(kbt_volume);

  auto* fuzzy = app.add_subcommand("fuzzy", "fuzzy block theory")->require_subcommand(1);
  auto* pbr = fuzzy->add_subcommand("pbr", "possibility of block removability per facet and code");
  project_opt(pbr, true);
  out_opt(pbr);
  pbr->add_option("--resolution", o.resolution, "direction samples on the sphere")->check(CLI::Range(16, 100000000));
  pbr->add_option("--delta-variant", o.delta_variant, "exceedance formula")->check(CLI::IsMember({"paper", "standard"}));
  pbr->add_option("--format", o.format, "csv or table (default: table on stdout, csv to a file)")
      ->check(CLI::IsMember({"csv", "table"}));

  auto* geom = app.add_subcommand("geom", "fuzzy plane geometry")->require_subcommand(1);
  auto* geom_eval = geom->add_subcommand("eval", "membership raster of the project shape (.csv or .svg)");
  project_opt(geom_eval, true);
  out_opt(geom_eval);

  auto* sur = app.add_subcommand("surrogate", "safety-factor surrogate")->require_subcommand(1);
  auto* gen = sur->add_subcommand("gen", "random dataset from the block kernel");
  project_opt(gen, true);
  out_opt(gen);
  seed_opt(gen);
  auto* train = sur->add_subcommand("train", "fit the fuzzy inference model");
  project_opt(train, false);
  train->add_option("-d,--data", o.data, "dataset CSV")->required();
  out_opt(train);
  seed_opt(train);
  train->add_option("--epochs", o.epochs, "training epochs")->check(CLI::PositiveNumber);
  train->add_option("--range", o.range, "normalization range lo,hi")->delimiter(',')->expected(2);
  auto* predict = sur->add_subcommand("predict", "evaluate the model on a CSV of inputs");
  predict->add_option("-m,--model", o.model, "model file")->required();
  predict->add_option("-d,--data", o.data, "input CSV")->required();
  out_opt(predict);
  auto* map = sur->add_subcommand("map", "predicted safety factor around the section (.csv or .svg)");
  map->add_option("-m,--model", o.model, "model file")->required();
  project_opt(map, false);
  out_opt(map);
  map->add_option("--bins", o.bins, "angular bins")->check(CLI::Range(8, 100000));

  auto* plot = app.add_subcommand("plot", "SVG from a CSV product");
  plot->add_option("-i,--input", o.input, "CSV file")->required();
  project_opt(plot, false);
  plot->add_option("-o,--out", o.out, "SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (kbt_analyze->parsed() || kbt_volume->parsed()) {
      auto p = load_project(o.project);
      OwnedString s;
      check(kbt_analyze->parsed() ? fb_kbt_analyze(p.get(), &s.p) : fb_kbt_volume(p.get(), &s.p));
      emit(o.out, s.str());
    } else if (pbr->parsed()) {
      auto p = load_project(o.project);
      const auto ro = run_options(*pbr, o);
      const bool to_file = !o.out.empty() && o.out != "-";
      const bool table = o.format.empty() ? !to_file : o.format == "table";
      OwnedString s;
      check(fb_fuzzy_pbr(p.get(), &ro, table ? FB_FORMAT_TABLE : FB_FORMAT_CSV, &s.p));
      emit(o.out, s.str());
    } else if (geom_eval->parsed()) {
      auto p = load_project(o.project);
      OwnedString s;
      check(fb_geom_eval(p.get(), ends_with(o.out, ".svg") ? FB_FORMAT_SVG : FB_FORMAT_CSV, &s.p));
      emit(o.out, s.str());
    } else if (gen->parsed()) {
      auto p = load_project(o.project);
      const auto ro = run_options(*gen, o);
      OwnedString s;
      check(fb_surrogate_gen(p.get(), &ro, &s.p));
      emit(o.out, s.str());
    } else if (train->parsed()) {
      Project p(nullptr, fb_project_free);
      if (!o.project.empty()) p = load_project(o.project);
      const auto ro = run_options(*train, o);
      const std::string data = slurp(o.data);
      OwnedString model, report;
      check(fb_surrogate_train(p.get(), &ro, data.c_str(), &model.p, &report.p));
      emit(o.out, model.str());
      std::fprintf(o.out.empty() || o.out == "-" ? stderr : stdout, "%s\n", report.str().c_str());
    } else if (predict->parsed()) {
      auto m = load_model(o.model);
      const std::string data = slurp(o.data);
      OwnedString s;
      check(fb_surrogate_predict(m.get(), data.c_str(), &s.p));
      emit(o.out, s.str());
    } else if (map->parsed()) {
      auto m = load_model(o.model);
      Project p(nullptr, fb_project_free);
      if (!o.project.empty()) p = load_project(o.project);
      const auto ro = run_options(*map, o);
      OwnedString s;
      check(fb_surrogate_map(m.get(), p.get(), &ro, ends_with(o.out, ".svg") ? FB_FORMAT_SVG : FB_FORMAT_CSV, &s.p));
      emit(o.out, s.str());
    } else if (plot->parsed()) {
      Project p(nullptr, fb_project_free);
      if (!o.project.empty()) p = load_project(o.project);
      const std::string csv = slurp(o.input);
      OwnedString s;
      check(fb_plot(csv.c_str(), p.get(), &s.p));
      emit(o.out, s.str());
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "fuzzyblock: %s\n", f.message.c_str());
    return f.code;
  }
  return 0;
}
