#pragma once

// Reference computations used to check the library. None of them call the
// routine they check; most are brute force.

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Trap = std::array<double, 4>;
using V3 = Eigen::Vector3d;

// Alpha-cut of a trapezoid written out from the ramp equations.
std::pair<double, double> cut(const Trap& t, double alpha);

// Largest alpha on the grid 0, step, 2 step, ... 1 for which feasible(alpha)
// holds, scanning every level. 0 when nothing is feasible.
double alpha_scan(const std::function<bool(double)>& feasible, double step = 1e-3);

// a x + b y = c feasibility with interval arithmetic on the cuts.
bool line_feasible(const Trap& a, const Trap& b, const Trap& c, double alpha, double x, double y);
// y = m x + b.
bool slope_feasible(const Trap& m, const Trap& b, double alpha, double x, double y);
// Point on some segment from P(alpha) to Q(alpha): for a mixing weight t the
// reachable set is the rectangle (1 - t) P + t Q, so each coordinate bounds t
// to an interval and the point is feasible when the intervals meet in [0, 1].
bool segment_feasible(const Trap& px, const Trap& py, const Trap& qx, const Trap& qy, double alpha, double x,
                      double y);

// Uniform unit vectors from a Gaussian draw.
std::vector<V3> sphere_directions(std::size_t n, std::uint64_t seed);
// max over the sampled directions of min_i n_i . v, and the maximizing direction.
double best_margin(const std::vector<V3>& normals, const std::vector<V3>& dirs, V3* argmax = nullptr);

// best_margin followed, when the sampled value is near zero, by a compass
// search on the sphere, so cones thinner than the sample spacing are found.
double refined_margin(const std::vector<V3>& normals, const std::vector<V3>& dirs, V3* argmax = nullptr);

// Monte-Carlo volume of {x : n_i . x >= d_i} inside the box [lo, hi].
double mc_volume(const std::vector<std::pair<V3, double>>& hs, const V3& lo, const V3& hi, std::size_t n,
                 std::uint64_t seed);

// Two-plane wedge: sliding along the intersection line, reactions from the
// 3x3 equilibrium r = T s - N1 m1 - N2 m2 solved by Cramer's rule.
struct Wedge {
  double T = 0.0, N1 = 0.0, N2 = 0.0, sf = 0.0;
  V3 s;
};
Wedge wedge(const V3& m1, const V3& m2, double phi1_deg, double phi2_deg, const V3& r);

// Central differences of f around x.
std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                                double h = 1e-6);

inline double deg(double d) { return d * 3.14159265358979323846 / 180.0; }

// Upward plane normal from dip / dip direction, x east, y north, z up.
V3 plane_normal(double dip_deg, double dd_deg);

}  // namespace oracle
