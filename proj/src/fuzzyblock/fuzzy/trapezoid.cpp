#include "fuzzyblock/fuzzy/trapezoid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "fuzzyblock/error.hpp"

namespace fuzzyblock::fuzzy {

TrapezoidalNumber::TrapezoidalNumber(double a1, double a2, double a3, double a4) : v_{a1, a2, a3, a4} {
  for (double x : v_) require(std::isfinite(x), "trapezoid endpoints must be finite");
  if (!(a1 <= a2 && a2 <= a3 && a3 <= a4)) {
    fail(ErrorCode::InvalidArgument,
         fmt::format("trapezoid ({}, {}, {}, {}) violates a1 <= a2 <= a3 <= a4", a1, a2, a3, a4));
  }
}

SampledFuzzyNumber::SampledFuzzyNumber(std::vector<AlphaInterval> levels) : levels_(std::move(levels)) {
  require(levels_.size() >= 2, "sampled fuzzy number needs at least the alpha 0 and alpha 1 levels");
  require(levels_.front().alpha == 0.0 && levels_.back().alpha == 1.0,
          "sampled fuzzy number must include alpha 0 and alpha 1");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& l = levels_[i];
    require(l.lo <= l.hi, fmt::format("alpha level {} has lo > hi", l.alpha));
    if (i == 0) continue;
    const auto& prev = levels_[i - 1];
    require(l.alpha > prev.alpha, "alpha levels must increase strictly");
    if (!prev.contains(l)) {
      fail(ErrorCode::InvalidArgument,
           fmt::format("alpha cuts not nested: [{}, {}] at {} is not inside [{}, {}] at {}", l.lo, l.hi,
                       l.alpha, prev.lo, prev.hi, prev.alpha));
    }
  }
}

std::vector<double> alpha_grid(int levels) {
  require(levels >= 2, "at least two alpha levels are required");
  std::vector<double> out(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i) out[i] = static_cast<double>(i) / (levels - 1);
  out.back() = 1.0;
  return out;
}

double membership(const TrapezoidalNumber& t, double x) {
  if (x < t.a1() || x > t.a4()) return 0.0;
  if (x >= t.a2() && x <= t.a3()) return 1.0;
  if (x < t.a2()) return (x - t.a1()) / (t.a2() - t.a1());
  return (t.a4() - x) / (t.a4() - t.a3());
}

AlphaInterval alpha_cut(const TrapezoidalNumber& t, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::InvalidArgument, fmt::format("alpha {} outside [0, 1]", alpha));
  double lo = t.a1() + alpha * (t.a2() - t.a1());
  double hi = t.a4() - alpha * (t.a4() - t.a3());
  // Rounding can push the ends past the core at alpha = 1.
  lo = std::min(lo, t.a2());
  hi = std::max(hi, t.a3());
  return {alpha, lo, hi};
}

TrapezoidalNumber scale(const TrapezoidalNumber& t, double k) {
  if (k >= 0.0) return {k * t.a1(), k * t.a2(), k * t.a3(), k * t.a4()};
  return {k * t.a4(), k * t.a3(), k * t.a2(), k * t.a1()};
}

TrapezoidalNumber linear_combine(std::span<const double> coeffs, std::span<const TrapezoidalNumber> terms) {
  require(!coeffs.empty(), "linear_combine needs at least one term");
  require(coeffs.size() == terms.size(), "linear_combine: coefficient and term counts differ");
  std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const auto s = scale(terms[i], coeffs[i]).values();
    for (int k = 0; k < 4; ++k) acc[k] += s[k];
  }
  return {acc[0], acc[1], acc[2], acc[3]};
}

double poss_measure_crisp(const TrapezoidalNumber& dist, double set_lo, double set_hi) {
  if (set_lo > set_hi) fail(ErrorCode::InvalidArgument, fmt::format("inverted interval [{}, {}]", set_lo, set_hi));
  if (set_hi < dist.a2()) return membership(dist, set_hi);
  if (set_lo > dist.a3()) return membership(dist, set_lo);
  return 1.0;
}

namespace {

// Height where the falling ramp of `left` meets the rising ramp of `right`,
// given left's core lies strictly below right's core.
double ramp_crossing(const TrapezoidalNumber& left, const TrapezoidalNumber& right) {
  if (left.a4() <= right.a1()) return 0.0;
  const double num = left.a4() - right.a1();
  const double den = (left.a4() - left.a3()) + (right.a2() - right.a1());
  return std::clamp(num / den, 0.0, 1.0);
}

}  // namespace

double poss_measure_fuzzy(const TrapezoidalNumber& dist, const TrapezoidalNumber& a) {
  if (std::max(dist.a2(), a.a2()) <= std::min(dist.a3(), a.a3())) return 1.0;
  if (dist.a3() < a.a2()) return ramp_crossing(dist, a);
  return ramp_crossing(a, dist);
}

double exceedance_poss(const TrapezoidalNumber& b, const TrapezoidalNumber& r, DeltaVariant variant) {
  if (b.a3() >= r.a4()) return 1.0;
  if (b.a4() <= r.a3()) return 0.0;
  const double num = b.a4() - r.a3();
  const double den = variant == DeltaVariant::Paper ? num + (r.a4() - r.a3()) : num + (r.a4() - b.a3());
  return std::clamp(num / den, 0.0, 1.0);
}

TrapezoidalNumber fit_trapezoid(const SampledFuzzyNumber& s) {
  const auto& sup = s.support();
  const auto& core = s.core();
  return {sup.lo, core.lo, core.hi, sup.hi};
}

SampledFuzzyNumber sample(const TrapezoidalNumber& t, int levels) {
  std::vector<AlphaInterval> cuts;
  for (double a : alpha_grid(levels)) cuts.push_back(alpha_cut(t, a));
  return SampledFuzzyNumber(std::move(cuts));
}

const char* to_string(DeltaVariant v) { return v == DeltaVariant::Paper ? "paper" : "standard"; }

DeltaVariant parse_delta_variant(const std::string& s) {
  if (s == "paper") return DeltaVariant::Paper;
  if (s == "standard") return DeltaVariant::Standard;
  fail(ErrorCode::InvalidArgument, fmt::format("unknown delta variant '{}' (expected paper or standard)", s));
}

}  // namespace fuzzyblock::fuzzy
