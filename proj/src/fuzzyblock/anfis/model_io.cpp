#include "fuzzyblock/anfis/model_io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include "fuzzyblock/error.hpp"

namespace fuzzyblock::anfis {

using nlohmann::json;

namespace {

json column(const ColumnRange& c) { return {{"name", c.name}, {"min", c.min}, {"max", c.max}}; }

ColumnRange column_from(const json& j) {
  return {j.at("name").get<std::string>(), j.at("min").get<double>(), j.at("max").get<double>()};
}

}  // namespace

std::string model_to_json(const TskModel& model, const std::vector<double>& rmse_history) {
  json j;
  j["schema_version"] = kModelSchemaVersion;
  j["inputs"] = model.input_names;
  json norm;
  norm["range"] = {model.normalization.lo, model.normalization.hi};
  norm["inputs"] = json::array();
  for (const auto& c : model.normalization.inputs) norm["inputs"].push_back(column(c));
  norm["target"] = column(model.normalization.target);
  j["normalization"] = norm;
  j["mfs"] = json::array();
  for (const auto& in : model.mfs) {
    json row = json::array();
    for (const auto& m : in) row.push_back({{"c", m.c}, {"a", m.a}, {"b", m.b}});
    j["mfs"].push_back(row);
  }
  j["consequents"] = model.consequents;
  j["medians"] = model.medians;
  if (!rmse_history.empty()) j["rmse_history"] = rmse_history;
  return j.dump(2) + "\n";
}

TskModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, fmt::format("model file is not valid JSON: {}", e.what()));
  }
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      fail(ErrorCode::Schema, fmt::format("model schema_version {} is not supported (expected {})", version,
                                          kModelSchemaVersion));
    }
    TskModel m;
    m.input_names = j.at("inputs").get<std::vector<std::string>>();
    const auto& norm = j.at("normalization");
    const auto range = norm.at("range").get<std::vector<double>>();
    if (range.size() != 2 || !(range[1] > range[0])) fail(ErrorCode::Schema, "normalization.range must be [lo, hi] with lo < hi");
    m.normalization.lo = range[0];
    m.normalization.hi = range[1];
    for (const auto& c : norm.at("inputs")) m.normalization.inputs.push_back(column_from(c));
    m.normalization.target = column_from(norm.at("target"));
    for (const auto& row : j.at("mfs")) {
      std::vector<BellMf> in;
      for (const auto& mf : row) in.push_back({mf.at("c").get<double>(), mf.at("a").get<double>(), mf.at("b").get<double>()});
      m.mfs.push_back(std::move(in));
    }
    m.consequents = j.at("consequents").get<std::vector<std::vector<double>>>();
    m.medians = j.at("medians").get<std::vector<double>>();

    const std::size_t d = m.input_names.size();
    if (m.mfs.size() != d) fail(ErrorCode::Schema, "mfs must have one entry per input");
    if (m.normalization.inputs.size() != d) fail(ErrorCode::Schema, "normalization.inputs must have one entry per input");
    if (m.medians.size() != d) fail(ErrorCode::Schema, "medians must have one entry per input");
    for (const auto& in : m.mfs) {
      if (in.empty()) fail(ErrorCode::Schema, "every input needs at least one membership function");
      for (const auto& mf : in) {
        if (!(mf.a != 0.0)) fail(ErrorCode::Schema, "membership function width must be nonzero");
      }
    }
    if (m.consequents.size() != m.rules()) {
      fail(ErrorCode::Schema, fmt::format("expected {} consequent rows, found {}", m.rules(), m.consequents.size()));
    }
    for (const auto& c : m.consequents) {
      if (c.size() != d + 1) fail(ErrorCode::Schema, "each consequent row needs inputs + 1 coefficients");
    }
    for (const auto& c : m.normalization.inputs) {
      if (!(c.max > c.min)) fail(ErrorCode::Schema, "normalization column '" + c.name + "' has an empty range");
    }
    return m;
  } catch (const json::exception& e) {
    fail(ErrorCode::Schema, fmt::format("model file: {}", e.what()));
  }
}

}  // namespace fuzzyblock::anfis
