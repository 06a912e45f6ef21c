#pragma once

// Globally adaptive Gauss-Kronrod (7/15) in the style of QUADPACK's QAG: the
// subinterval with the largest error estimate is bisected until the summed
// error meets an absolute target derived from the L1 magnitude of the
// integrand, or the interval budget is spent. Boost supplies the rule.

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fsburgers::detail {

template <typename F>
double gk15(const F& f, double a, double b, double* err) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, err);
}

struct QuadSegment {
  double a, b, value, error;
  bool operator<(const QuadSegment& o) const { return error < o.error; }
};

/// int f over [points.front(), points.back()], with the interior points as
/// initial breakpoints. Error target max(rel_tol * int|f|, abs_floor).
template <typename F>
double adaptive_integrate(const F& f, const std::vector<double>& points, double rel_tol,
                          double abs_floor = 0.0, int max_segments = 500) {
  std::priority_queue<QuadSegment> heap;
  double total = 0.0;
  double total_err = 0.0;
  double l1 = 0.0;
  const auto abs_f = [&](double x) { return std::abs(f(x)); };
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double a = points[i];
    const double b = points[i + 1];
    if (!(b > a)) continue;
    double err = 0.0, l1_err = 0.0;
    const double value = gk15(f, a, b, &err);
    heap.push({a, b, value, err});
    total += value;
    total_err += err;
    l1 += gk15(abs_f, a, b, &l1_err);
  }
  if (heap.empty()) return 0.0;

  for (int n = static_cast<int>(heap.size()); n < max_segments; ++n) {
    const double target = std::max(rel_tol * std::max(l1, std::abs(total)), abs_floor);
    if (total_err <= target) break;
    QuadSegment worst = heap.top();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) break;
    heap.pop();
    double el = 0.0, er = 0.0;
    const double left = gk15(f, worst.a, m, &el);
    const double right = gk15(f, m, worst.b, &er);
    total += left + right - worst.value;
    total_err += el + er - worst.error;
    heap.push({worst.a, m, left, el});
    heap.push({m, worst.b, right, er});
  }
  // Re-sum to avoid drift from the incremental updates.
  std::vector<QuadSegment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const QuadSegment& x, const QuadSegment& y) { return x.a < y.a; });
  double sum = 0.0;
  for (const auto& s : segs) sum += s.value;
  return sum;
}

}  // namespace fsburgers::detail

namespace fsburgers::detail {

template <typename F>
double adaptive_integrate(const F& f, double a, double b, double rel_tol, double abs_floor = 0.0,
                          int max_segments = 500) {
  return adaptive_integrate(f, std::vector<double>{a, b}, rel_tol, abs_floor, max_segments);
}

}  // namespace fsburgers::detail
