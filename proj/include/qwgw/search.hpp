#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <utility>

namespace qwgw {

struct Box2 {
  std::array<double, 2> lo;
  std::array<double, 2> hi;
};

struct SearchResult {
  std::array<double, 2> x;
  double value;
};

/// Derivative-free coordinate (compass) search for a local maximum of f.
/// Probes +-step along each axis, moves on strict improvement, halves the
/// step otherwise; stops once the step drops below `min_step`. Points are
/// clamped to `box`.
inline SearchResult compass_maximize(const std::function<double(double, double)>& f,
                                     std::array<double, 2> x, double step, double min_step,
                                     const Box2& box) {
  double best = f(x[0], x[1]);
  while (step >= min_step) {
    bool moved = false;
    for (int axis = 0; axis < 2; ++axis) {
      for (double dir : {1.0, -1.0}) {
        auto y = x;
        y[axis] = std::clamp(y[axis] + dir * step, box.lo[axis], box.hi[axis]);
        if (y[axis] == x[axis]) continue;
        const double v = f(y[0], y[1]);
        if (v > best) {
          best = v;
          x = y;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step /= 2;
  }
  return {x, best};
}

/// One-dimensional variant on [lo, hi].
inline std::pair<double, double> compass_maximize_1d(const std::function<double(double)>& f,
                                                     double x, double step, double min_step,
                                                     double lo, double hi) {
  auto r = compass_maximize([&](double a, double) { return f(a); }, {x, 0.0}, step, min_step,
                            Box2{{lo, 0.0}, {hi, 0.0}});
  return {r.x[0], r.value};
}

}  // namespace qwgw
