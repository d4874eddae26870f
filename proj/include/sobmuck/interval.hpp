#ifndef SOBMUCK_INTERVAL_HPP
#define SOBMUCK_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>

namespace sobmuck {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed interval [lo, hi], possibly unbounded. Endpoint arithmetic without
// directed rounding: certification is at the level of exact-real semantics
// of the enclosing formulas, not last-ulp floating point.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double v) : lo(v), hi(v) {}
  Interval(double l, double h) : lo(l), hi(h) {}

  double width() const { return hi - lo; }
  double mid() const {
    if (std::isinf(lo) || std::isinf(hi)) return std::isinf(lo) ? hi : lo;
    return 0.5 * (lo + hi);
  }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool containsZero() const { return lo <= 0.0 && 0.0 <= hi; }
  Interval hull(const Interval& o) const {
    return {std::min(lo, o.lo), std::max(hi, o.hi)};
  }
};

inline Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval operator-(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline double mul0(double a, double b) {
  // 0 * inf = 0 convention, needed for measure-theoretic products
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

inline Interval operator*(Interval a, Interval b) {
  double v1 = mul0(a.lo, b.lo), v2 = mul0(a.lo, b.hi);
  double v3 = mul0(a.hi, b.lo), v4 = mul0(a.hi, b.hi);
  return {std::min(std::min(v1, v2), std::min(v3, v4)),
          std::max(std::max(v1, v2), std::max(v3, v4))};
}

inline Interval operator*(double s, Interval a) { return Interval(s) * a; }

// Division assuming 0 is not interior to b.
inline Interval operator/(Interval a, Interval b) {
  auto d = [](double x, double y) {
    if (x == 0.0) return 0.0;
    if (y == 0.0) return x > 0 ? kInf : -kInf;
    return x / y;
  };
  double v1 = d(a.lo, b.lo), v2 = d(a.lo, b.hi), v3 = d(a.hi, b.lo), v4 = d(a.hi, b.hi);
  return {std::min(std::min(v1, v2), std::min(v3, v4)),
          std::max(std::max(v1, v2), std::max(v3, v4))};
}

inline Interval sqr(Interval a) {
  double l = std::abs(a.lo), h = std::abs(a.hi);
  double mx = std::max(l, h), mn = a.containsZero() ? 0.0 : std::min(l, h);
  return {mn * mn, mx * mx};
}

// x^e for x >= 0 (monotone in x for either sign of e)
inline Interval powPos(Interval x, double e) {
  if (e == 0.0) return {1.0, 1.0};
  auto p = [&](double v) {
    if (v == 0.0) return e > 0 ? 0.0 : kInf;
    if (std::isinf(v)) return e > 0 ? kInf : 0.0;
    return std::pow(v, e);
  };
  double a = p(x.lo), b = p(x.hi);
  return {std::min(a, b), std::max(a, b)};
}

inline Interval expI(Interval x) { return {std::exp(x.lo), std::exp(x.hi)}; }
inline Interval logI(Interval x) { return {std::log(x.lo), std::log(x.hi)}; }

inline Interval intersectI(Interval a, Interval b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

}  // namespace sobmuck

#endif
