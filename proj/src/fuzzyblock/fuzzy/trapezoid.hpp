#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace fuzzyblock::fuzzy {

// Trapezoidal fuzzy number (a1, a2, a3, a4): support [a1, a4], core [a2, a3].
// a1 == a2 == a3 == a4 is a crisp real.
class TrapezoidalNumber {
 public:
  TrapezoidalNumber() = default;
  TrapezoidalNumber(double a1, double a2, double a3, double a4);

  static TrapezoidalNumber crisp(double x) { return {x, x, x, x}; }
  // Symmetric number with core `center` and support center +- spread.
  static TrapezoidalNumber triangular(double center, double spread) {
    return {center - spread, center, center, center + spread};
  }

  double a1() const { return v_[0]; }
  double a2() const { return v_[1]; }
  double a3() const { return v_[2]; }
  double a4() const { return v_[3]; }
  const std::array<double, 4>& values() const { return v_; }

  bool is_crisp() const { return v_[0] == v_[3]; }
  double core_mid() const { return 0.5 * (v_[1] + v_[2]); }

  bool operator==(const TrapezoidalNumber&) const = default;

 private:
  std::array<double, 4> v_{0.0, 0.0, 0.0, 0.0};
};

struct AlphaInterval {
  double alpha = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const AlphaInterval& o) const { return lo <= o.lo && o.hi <= hi; }
};

// Non-trapezoidal fuzzy quantity stored as nested alpha-cuts.
class SampledFuzzyNumber {
 public:
  // Levels must start at alpha 0, end at alpha 1, increase strictly and nest.
  explicit SampledFuzzyNumber(std::vector<AlphaInterval> levels);

  const std::vector<AlphaInterval>& levels() const { return levels_; }
  const AlphaInterval& support() const { return levels_.front(); }
  const AlphaInterval& core() const { return levels_.back(); }

 private:
  std::vector<AlphaInterval> levels_;
};

enum class DeltaVariant { Paper, Standard };

inline constexpr int kDefaultAlphaLevels = 11;

// Equispaced alpha values 0, 1/(n-1), ..., 1.
std::vector<double> alpha_grid(int levels);

double membership(const TrapezoidalNumber& t, double x);
AlphaInterval alpha_cut(const TrapezoidalNumber& t, double alpha);

// Exact trapezoid of sum_k coeffs[k] * terms[k].
TrapezoidalNumber linear_combine(std::span<const double> coeffs,
                                 std::span<const TrapezoidalNumber> terms);
TrapezoidalNumber scale(const TrapezoidalNumber& t, double k);

// Possibility of the crisp set [set_lo, set_hi] under distribution `dist`.
double poss_measure_crisp(const TrapezoidalNumber& dist, double set_lo, double set_hi);
// sup-min possibility of fuzzy event `a` under distribution `dist`.
double poss_measure_fuzzy(const TrapezoidalNumber& dist, const TrapezoidalNumber& a);

// Strict exceedance possibility Poss[b >= r]. The cases partition as
// b3 >= r4 -> 1, b4 <= r3 -> 0, otherwise delta (clamped to [0, 1]).
double exceedance_poss(const TrapezoidalNumber& b, const TrapezoidalNumber& r,
                       DeltaVariant variant = DeltaVariant::Paper);

// Linearization: support from the alpha = 0 level, core from alpha = 1.
TrapezoidalNumber fit_trapezoid(const SampledFuzzyNumber& s);

SampledFuzzyNumber sample(const TrapezoidalNumber& t, int levels = kDefaultAlphaLevels);

const char* to_string(DeltaVariant v);
DeltaVariant parse_delta_variant(const std::string& s);

}  // namespace fuzzyblock::fuzzy
