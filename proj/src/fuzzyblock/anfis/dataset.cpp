#include "fuzzyblock/anfis/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "fuzzyblock/error.hpp"
#include "fuzzyblock/parallel.hpp"

namespace fuzzyblock::anfis {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double draw(const VarRange& r, double u) { return r.lo + u * (r.hi - r.lo); }

void check_range(const VarRange& r, const char* name) {
  if (!(r.hi > r.lo)) fail(ErrorCode::Semantic, fmt::format("dataset range for {} is empty", name));
}

}  // namespace

void DatasetSpec::validate() const {
  check_range(dip, "dip");
  check_range(dip_direction, "dip_direction");
  check_range(friction, "friction");
  check_range(position_angle, "position_angle");
  if (dip.lo < 0.0 || dip.hi > 90.0) fail(ErrorCode::Semantic, "dataset dip range must lie inside [0, 90]");
  if (friction.lo < 0.0 || friction.hi >= 90.0) fail(ErrorCode::Semantic, "dataset friction range must lie inside [0, 90)");
  if (sample_count < 1) fail(ErrorCode::Semantic, "sample_count must be at least 1");
  if (joints.empty()) fail(ErrorCode::Semantic, "dataset generation needs a joint set template");
  if (joints.size() > 8) fail(ErrorCode::Semantic, "at most 8 joints can be enumerated");
  if (!(unit_weight > 0.0)) fail(ErrorCode::Semantic, "unit weight must be positive");
  if (!(sf_cap > 0.0)) fail(ErrorCode::Semantic, "safety factor cap must be positive");
}

double keyed_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt, std::uint64_t draw_no) {
  const std::uint64_t key = splitmix64(seed ^ splitmix64(index ^ splitmix64(attempt ^ splitmix64(draw_no))));
  std::mt19937_64 gen(key);
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

CriticalBlock critical_block(std::span<const kbt::JointPlane> joints, const kbt::TunnelSection& tunnel,
                             double unit_weight, double angle_deg, const kbt::BlockAnalysisOptions& analysis,
                             double sf_cap) {
  const auto& facet = tunnel.facets()[tunnel.facet_at_angle(angle_deg)];
  const auto box = kbt::analysis_box(tunnel, analysis);
  const kbt::Vec3 gravity(0.0, 0.0, -unit_weight);
  CriticalBlock out{sf_cap, 0.0, ""};
  const std::size_t codes = std::size_t{1} << joints.size();
  for (std::size_t k = 0; k < codes; ++k) {
    const auto code = kbt::BlockCode::from_index(k, joints.size());
    const auto rec = kbt::analyze_block(code, joints, facet, gravity, box);
    if (rec.block_class != kbt::BlockClass::Removable) continue;
    if (!rec.safety_factor || !rec.volume) fail(ErrorCode::Numeric, "block " + code.str() + ": " + rec.note);
    const double sf = std::min(*rec.safety_factor, sf_cap);
    if (out.code.empty() || sf < out.safety_factor) out = {sf, *rec.volume, code.str()};
  }
  return out;
}

std::vector<kbt::JointPlane> sampled_joints(const DatasetSpec& spec, double dip, double dip_direction,
                                            double friction) {
  auto joints = spec.joints;
  double dd = std::fmod(dip_direction, 360.0);
  if (dd < 0.0) dd += 360.0;
  joints.front().orientation = {dip, dd};
  for (auto& j : joints) j.friction_deg = friction;
  return joints;
}

std::vector<Sample> generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  std::vector<Sample> out(static_cast<std::size_t>(spec.sample_count));
  parallel_for(out.size(), [&](std::size_t i) {
    std::string last_error;
    for (int attempt = 0; attempt <= spec.max_retries; ++attempt) {
      const double dip = draw(spec.dip, keyed_uniform(spec.seed, i, attempt, 0));
      const double dd = draw(spec.dip_direction, keyed_uniform(spec.seed, i, attempt, 1));
      const double phi = draw(spec.friction, keyed_uniform(spec.seed, i, attempt, 2));
      const double angle = draw(spec.position_angle, keyed_uniform(spec.seed, i, attempt, 3));
      const auto joints = sampled_joints(spec, dip, dd, phi);
      try {
        const auto cb = critical_block(joints, spec.tunnel, spec.unit_weight, angle, spec.analysis, spec.sf_cap);
        out[i] = {{dip, joints.front().orientation.dip_direction, phi, angle, cb.volume}, cb.safety_factor};
        return;
      } catch (const Error& e) {
        last_error = e.what();
      }
    }
    fail(ErrorCode::Numeric, fmt::format("sample {} failed after {} retries: {}", i, spec.max_retries, last_error));
  });
  return out;
}

std::vector<double> NormalizationRecord::normalize_inputs(std::span<const double> raw) const {
  require(raw.size() == inputs.size(), "input vector length does not match the normalization record");
  std::vector<double> out(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) out[k] = forward(inputs[k], raw[k]);
  return out;
}

NormalizedData normalize(std::span<const Sample> samples, double lo, double hi, const std::vector<std::string>& names) {
  require(!samples.empty(), "cannot normalize an empty dataset");
  require(hi > lo, "normalization range must satisfy lo < hi");
  const std::size_t d = samples.front().inputs.size();
  require(names.size() == d, "one column name per input is required");
  NormalizedData nd;
  nd.record.lo = lo;
  nd.record.hi = hi;
  auto span_of = [&](auto getter, const std::string& name) {
    ColumnRange c{name, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& s : samples) {
      const double v = getter(s);
      c.min = std::min(c.min, v);
      c.max = std::max(c.max, v);
    }
    if (!(c.max > c.min)) fail(ErrorCode::InvalidArgument, fmt::format("column '{}' is constant", name));
    return c;
  };
  for (std::size_t k = 0; k < d; ++k) {
    nd.record.inputs.push_back(span_of([k](const Sample& s) { return s.inputs.at(k); }, names[k]));
  }
  nd.record.target = span_of([](const Sample& s) { return s.target; }, kTargetName);
  nd.samples.reserve(samples.size());
  for (const auto& s : samples) {
    nd.samples.push_back({nd.record.normalize_inputs(s.inputs), nd.record.normalize_target(s.target)});
  }
  return nd;
}

std::vector<double> column_medians(std::span<const Sample> samples) {
  require(!samples.empty(), "median of an empty dataset");
  const std::size_t d = samples.front().inputs.size();
  std::vector<double> med(d);
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> col;
    for (const auto& s : samples) col.push_back(s.inputs[k]);
    std::sort(col.begin(), col.end());
    const std::size_t n = col.size();
    med[k] = n % 2 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
  }
  return med;
}

Split holdout_split(std::size_t n, double train_fraction, std::uint64_t seed) {
  require(train_fraction > 0.0 && train_fraction < 1.0, "train fraction must lie in (0, 1)");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(keyed_uniform(seed, i, 0, 0x5b1d) * static_cast<double>(i));
    std::swap(idx[i - 1], idx[std::min(j, i - 1)]);
  }
  const auto ntrain = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  Split s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(ntrain));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(ntrain), idx.end());
  return s;
}

}  // namespace fuzzyblock::anfis
