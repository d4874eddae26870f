#ifndef SOBMUCK_ORDER_HPP
#define SOBMUCK_ORDER_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace sobmuck {

enum class Tri { Yes, No, Unknown };

// Asymptotic order of a weight near a point, in normal form
//
//   w(x) ~ exp(sum_i rate_i * d^-gamma_i) * d^alpha * L^p1 * LL^p2 * LLL^p3,
//
// where d = |x - center|, L = log(1/d), LL = log L, LLL = log LL.
// The pw array holds (alpha, p1, p2, p3); pw[3] is never produced by a
// factor product directly, only by antiderivatives of boundary cases.
// `slowFactor` = +1 marks an extra unmodelled factor tending to +infinity
// slower than every modelled one (arises from iterated-log antiderivative
// overflow); 0 means none.
struct ExpTerm {
  double gamma = 1.0;
  double rate = 0.0;  // negative rate = decaying exponential factor
};

struct OrderTuple {
  bool zero = false;  // w identically 0 near the point
  std::vector<ExpTerm> exps;  // sorted by gamma descending, rates nonzero
  std::array<double, 4> pw{0.0, 0.0, 0.0, 0.0};
  int slowFactor = 0;

  static OrderTuple zeroWeight() {
    OrderTuple t;
    t.zero = true;
    return t;
  }
  bool isTrivial() const {
    return !zero && exps.empty() && pw == std::array<double, 4>{0, 0, 0, 0} &&
           slowFactor == 0;
  }

  void normalize() {
    std::sort(exps.begin(), exps.end(),
              [](const ExpTerm& a, const ExpTerm& b) { return a.gamma > b.gamma; });
    std::vector<ExpTerm> merged;
    for (const auto& e : exps) {
      if (!merged.empty() && merged.back().gamma == e.gamma)
        merged.back().rate += e.rate;
      else
        merged.push_back(e);
    }
    std::erase_if(merged, [](const ExpTerm& e) { return e.rate == 0.0; });
    exps = std::move(merged);
  }
};

// Order of a product of two weights.
inline OrderTuple orderProduct(const OrderTuple& a, const OrderTuple& b) {
  if (a.zero || b.zero) return OrderTuple::zeroWeight();
  OrderTuple t;
  t.exps = a.exps;
  t.exps.insert(t.exps.end(), b.exps.begin(), b.exps.end());
  for (int i = 0; i < 4; ++i) t.pw[i] = a.pw[i] + b.pw[i];
  t.slowFactor = a.slowFactor + b.slowFactor;
  t.normalize();
  return t;
}

// Order of w^s. Not defined for the zero weight when s < 0 (callers treat
// reciprocals of zero weights as divergent before reaching here).
inline OrderTuple orderPower(const OrderTuple& a, double s) {
  OrderTuple t;
  t.zero = a.zero;
  t.exps = a.exps;
  for (auto& e : t.exps) e.rate *= s;
  for (int i = 0; i < 4; ++i) t.pw[i] = a.pw[i] * s;
  t.slowFactor = (s >= 0 ? a.slowFactor : -a.slowFactor);
  t.normalize();
  return t;
}

// Three-way asymptotic comparison of w1 against w2 as d -> 0:
//   +1  w1/w2 -> infinity
//    0  w1/w2 bounded above and below (up to envelope constants)
//   -1  w1/w2 -> 0
// Convention for zero weights: zero is strictly below every nonzero weight;
// zero vs zero compares equal.
inline int orderCompare(const OrderTuple& a, const OrderTuple& b) {
  if (a.zero && b.zero) return 0;
  if (a.zero) return -1;
  if (b.zero) return +1;
  // exponential profiles: ratio exponent sum (a.rate - b.rate) d^-gamma,
  // largest gamma with a nonzero net rate decides.
  size_t i = 0, j = 0;
  while (i < a.exps.size() || j < b.exps.size()) {
    double ga = i < a.exps.size() ? a.exps[i].gamma : -1.0;
    double gb = j < b.exps.size() ? b.exps[j].gamma : -1.0;
    if (ga > gb) {
      if (a.exps[i].rate != 0.0) return a.exps[i].rate > 0 ? +1 : -1;
      ++i;
    } else if (gb > ga) {
      if (b.exps[j].rate != 0.0) return b.exps[j].rate > 0 ? -1 : +1;
      ++j;
    } else {
      double diff = a.exps[i].rate - b.exps[j].rate;
      if (diff != 0.0) return diff > 0 ? +1 : -1;
      ++i;
      ++j;
    }
  }
  // power: smaller alpha is the bigger weight near the center
  if (a.pw[0] != b.pw[0]) return a.pw[0] < b.pw[0] ? +1 : -1;
  // iterated logs diverge, so larger exponent is the bigger weight
  for (int k = 1; k < 4; ++k)
    if (a.pw[k] != b.pw[k]) return a.pw[k] > b.pw[k] ? +1 : -1;
  if (a.slowFactor != b.slowFactor) return a.slowFactor > b.slowFactor ? +1 : -1;
  return 0;
}

// Sign of the limit of a weight with this order as d -> 0:
//   +1 diverges to +infinity, 0 bounded positive limit, -1 tends to 0.
inline int orderLimitSign(const OrderTuple& t) {
  OrderTuple one;
  return orderCompare(t, one);
}

// Integrability of a function of this order over (0, d0).
// Total on orders reachable from factor products and their antiderivatives.
inline Tri orderIntegrable(const OrderTuple& t) {
  if (t.zero) return Tri::Yes;
  for (const auto& e : t.exps)
    if (e.rate != 0.0) return e.rate < 0 ? Tri::Yes : Tri::No;
  // pw[0]: variable d -> 0; pw[k>=1]: after substitution the variable runs
  // to infinity, flipping the comparison direction.
  if (t.pw[0] != -1.0) return t.pw[0] > -1.0 ? Tri::Yes : Tri::No;
  for (int k = 1; k < 4; ++k)
    if (t.pw[k] != -1.0) return t.pw[k] < -1.0 ? Tri::Yes : Tri::No;
  return Tri::No;  // d^-1 L^-1 LL^-1 LLL^-1: next iterated log diverges
}

// Order of the integral: tail integral(0,d) when integrable, growth of the
// partial integral when divergent. The boundary case with every slot equal
// to -1 diverges like the next (unmodelled) iterated log; the result then
// carries slowFactor = +1.
inline OrderTuple orderAntiderivative(const OrderTuple& t) {
  OrderTuple r;
  if (t.zero) {
    r.zero = true;
    return r;
  }
  if (!t.exps.empty()) {
    r.exps = t.exps;
    r.pw = t.pw;
    r.pw[0] += t.exps.front().gamma + 1.0;
    r.slowFactor = t.slowFactor;
    return r;
  }
  for (int k = 0; k < 4; ++k) {
    if (t.pw[k] != -1.0) {
      r.pw[k] = t.pw[k] + 1.0;
      for (int j = k + 1; j < 4; ++j) r.pw[j] = t.pw[j];
      r.slowFactor = t.slowFactor;
      return r;
    }
  }
  r.slowFactor = t.slowFactor + 1;
  return r;
}

// Sign of the limit of the product of quantities with orders a and b
// (e.g. measure tail times W^(p-1)): +1 -> +infinity, 0 bounded, -1 -> 0.
inline int productLimitSign(const OrderTuple& a, const OrderTuple& b) {
  return orderLimitSign(orderProduct(a, b));
}

inline std::string to_string(const OrderTuple& t) {
  if (t.zero) return "zero";
  std::string s;
  for (const auto& e : t.exps)
    s += "exp(" + std::to_string(e.rate) + "*d^-" + std::to_string(e.gamma) + ")";
  s += "d^" + std::to_string(t.pw[0]);
  const char* names[3] = {"L", "LL", "LLL"};
  for (int k = 1; k < 4; ++k)
    if (t.pw[k] != 0.0) s += std::string(names[k - 1]) + "^" + std::to_string(t.pw[k]);
  if (t.slowFactor) s += "(slow^" + std::to_string(t.slowFactor) + ")";
  return s;
}

}  // namespace sobmuck

#endif
