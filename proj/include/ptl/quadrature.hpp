#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace ptl {

// Adaptive Simpson quadrature with interval bisection and Richardson
// correction. An interval is accepted once |S(left) + S(right) - S(whole)|
// <= 15 * tol, with tol halved on every split. The global tolerance is
// max(abs_floor, rel_tol * |coarse estimate|).
template <class F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol = 1e-9,
                        double abs_floor = 1e-15, int max_depth = 48) {
  if (!(b > a)) return 0.0;
  struct Interval {
    double a, b, fa, fm, fb, whole, tol;
    int depth;
  };
  auto simpson = [](double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };

  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = simpson(a, b, fa, fm, fb);
  const double tol = std::max(abs_floor, rel_tol * std::abs(whole));

  double total = 0.0;
  std::vector<Interval> stack{{a, b, fa, fm, fb, whole, tol, 0}};
  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (iv.a + iv.b);
    const double lm = 0.5 * (iv.a + mid);
    const double rm = 0.5 * (mid + iv.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(iv.a, mid, iv.fa, flm, iv.fm);
    const double right = simpson(mid, iv.b, iv.fm, frm, iv.fb);
    const double delta = left + right - iv.whole;
    if (iv.depth >= max_depth || std::abs(delta) <= 15.0 * iv.tol) {
      total += left + right + delta / 15.0;
      continue;
    }
    const double half_tol = std::max(0.5 * iv.tol, 0.5 * abs_floor);
    stack.push_back({mid, iv.b, iv.fm, frm, iv.fb, right, half_tol, iv.depth + 1});
    stack.push_back({iv.a, mid, iv.fa, flm, iv.fm, left, half_tol, iv.depth + 1});
  }
  return total;
}

}  // namespace ptl
