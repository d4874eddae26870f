#include "sobmuck/measure.hpp"

#include <algorithm>
#include <cmath>

#include "sobmuck/integrate.hpp"

namespace sobmuck {

namespace {

bool atomIncluded(double x, double c, double d, bool closedLeft, bool closedRight) {
  if (samePoint(x, c)) return closedLeft;
  if (samePoint(x, d)) return closedRight;
  return x > c && x < d;
}

}  // namespace

Enclosure measure_of(const Measure& m, double c, double d, bool closedLeft,
                     bool closedRight, double tol) {
  if (c < m.a() - 1e-12 || d > m.b() + 1e-12 || c > d)
    throw PreconditionError("interval not contained in the support");
  Enclosure total;
  int nseg = 0;
  for (const auto& p : m.w.pieces) {
    if (std::min(d, p.hi) > std::max(c, p.lo)) ++nseg;
  }
  double segTol = tol / std::max(1, nseg);
  for (const auto& p : m.w.pieces) {
    double u = std::max(c, p.lo), v = std::min(d, p.hi);
    if (u >= v) continue;
    PieceIntegral r = integratePiece(p, u, v, segTol);
    if (r.div) {
      Enclosure e{total.lo + r.bracket.lo, kInf};
      e.diverged = r.div;
      return e;
    }
    total.lo += r.bracket.lo;
    total.hi += r.bracket.hi;
  }
  for (const auto& at : m.atoms)
    if (atomIncluded(at.x, c, d, closedLeft, closedRight)) {
      total.lo += at.mass;
      total.hi += at.mass;
    }
  return total;
}

Enclosure measure_of(const NumericMeasure& m, double c, double d, bool closedLeft,
                     bool closedRight, double tol) {
  if (c < m.a() - 1e-12 || d > m.b() + 1e-12 || c > d)
    throw PreconditionError("interval not contained in the support");
  Enclosure total;
  // integrate per break-cell so the range function sees single-formula cells
  std::vector<double> cuts{c, d};
  for (double x : m.d.breaks)
    if (x > c && x < d) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  double segTol = tol / std::max<size_t>(1, cuts.size());
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    PieceIntegral r = integrateRanged(m.d.range, m.d.eval, cuts[i], cuts[i + 1],
                                      m.d.guards, segTol);
    total.lo += r.bracket.lo;
    total.hi += r.bracket.hi;
  }
  for (const auto& at : m.atoms)
    if (atomIncluded(at.x, c, d, closedLeft, closedRight)) {
      total.lo += at.mass;
      total.hi += at.mass;
    }
  return total;
}

Enclosure total_mass(const Measure& m, double tol) {
  return measure_of(m, m.a(), m.b(), true, true, tol);
}
Enclosure total_mass(const NumericMeasure& m, double tol) {
  return measure_of(m, m.a(), m.b(), true, true, tol);
}
bool is_finite(const Measure& m) { return total_mass(m).finite(); }
bool is_finite(const NumericMeasure& m) { return total_mass(m).finite(); }

namespace {

// Certified range of a symbolic weight over a cell (handles piece overlap).
Interval weightRange(const WeightExpr& w, double u, double v) {
  Interval r{kInf, 0.0};
  bool any = false;
  for (const auto& p : w.pieces) {
    double x = std::max(u, p.lo), y = std::min(v, p.hi);
    if (x >= y) continue;
    Interval pr = p.zero ? Interval{0, 0} : pieceRange(p, x, y);
    r = any ? r.hull(pr) : pr;
    any = true;
  }
  if (!any) return {0, 0};
  return r;
}

SideTag positivePartTag(const WeightExpr& w1, const WeightExpr& w2, double k,
                        double x, bool fromLeft) {
  OrderTuple o1 = w1.orderAt(x, fromLeft);
  if (k == 0.0) return {SideTag::Exact, o1};
  if (o1.zero) return {SideTag::Zero, OrderTuple::zeroWeight()};
  OrderTuple o2 = w2.orderAt(x, fromLeft);
  if (o2.zero) return {SideTag::Exact, o1};
  int cmp = orderCompare(o1, o2);
  if (cmp > 0) return {SideTag::Exact, o1};
  if (cmp < 0) return {SideTag::Zero, OrderTuple::zeroWeight()};
  // equal orders: the ratio tends to a constant within envelope bounds
  double probe = fromLeft ? x - 1e-13 * (1 + std::abs(x)) : x + 1e-13 * (1 + std::abs(x));
  const Piece& p1 = w1.pieces[w1.pieceIndexAt(std::clamp(probe, w1.a, w1.b))];
  const Piece& p2 = w2.pieces[w2.pieceIndexAt(std::clamp(probe, w2.a, w2.b))];
  Interval e1 = pieceEnvelope(p1), e2 = pieceEnvelope(p2);
  double ratioHi = p1.coeff * e1.hi / (p2.coeff * e2.lo);
  double ratioLo = p1.coeff * e1.lo / (p2.coeff * e2.hi);
  if (k > ratioHi) return {SideTag::Zero, OrderTuple::zeroWeight()};
  if (k < ratioLo) return {SideTag::Exact, o1};
  return {SideTag::Upper, o1};
}

}  // namespace

NumericMeasure positive_part(const Measure& nu1, double k, const Measure& nu2) {
  if (k < 0) throw PreconditionError("positive part requires k >= 0");
  NumericMeasure r;
  double A = nu1.a(), B = nu1.b();
  r.d.a = A;
  r.d.b = B;

  std::vector<double> breaks{A, B};
  for (const auto& p : nu1.w.pieces)
    for (double x : {p.lo, p.hi})
      if (x > A && x < B) breaks.push_back(x);
  for (const auto& p : nu2.w.pieces)
    for (double x : {p.lo, p.hi})
      if (x > A && x < B) breaks.push_back(x);
  for (double x : {nu2.a(), nu2.b()})
    if (x > A && x < B) breaks.push_back(x);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return samePoint(a, b); }),
               breaks.end());
  r.d.breaks = breaks;

  WeightExpr w1 = nu1.w, w2 = nu2.w;
  auto w2at = [w2](double x) -> double {
    if (x < w2.a || x > w2.b) return 0.0;
    return w2.at(x);
  };
  r.d.eval = [w1, w2at, k](double x) {
    double v1 = w1.at(x);
    double v2 = w2at(x);
    if (std::isinf(v1)) return kInf;
    return std::max(v1 - k * v2, 0.0);
  };
  r.d.range = [w1, w2, k](double u, double v) -> Interval {
    Interval r1 = weightRange(w1, u, v);
    Interval r2{0, 0};
    double x = std::max(u, w2.a), y = std::min(v, w2.b);
    if (x < y) {
      r2 = weightRange(w2, x, y);
      if (u < w2.a || v > w2.b) r2 = r2.hull({0, 0});
    }
    double lo = std::max(r1.lo - k * r2.hi, 0.0);
    double hi = std::max(r1.hi - k * r2.lo, 0.0);
    return {lo, hi};
  };

  size_t n = breaks.size();
  r.d.tagLeft.resize(n > 0 ? n - 1 : 0);
  r.d.tagRight.resize(n > 0 ? n - 1 : 0);
  for (size_t i = 0; i + 1 < n; ++i) {
    r.d.tagLeft[i] = positivePartTag(w1, w2, k, breaks[i], /*fromLeft=*/false);
    r.d.tagRight[i] = positivePartTag(w1, w2, k, breaks[i + 1], /*fromLeft=*/true);
  }

  // dominating guards where w1 has an individually unbounded factor, so
  // cell ranges near those points stay infinite
  auto unboundedAt = [](const Piece& p, double x) {
    if (p.zero) return false;
    for (const auto& f : p.factors) {
      if (!samePoint(f.center, x)) continue;
      if (f.kind == FactorKind::Power && f.e < 0) return true;
      if ((f.kind == FactorKind::LogPower || f.kind == FactorKind::LogLogPower) &&
          f.e > 0)
        return true;
    }
    return false;
  };
  for (const auto& p : w1.pieces) {
    if (unboundedAt(p, p.lo)) r.d.guards.push_back({p.lo, false, p});
    if (unboundedAt(p, p.hi)) r.d.guards.push_back({p.hi, true, p});
  }

  auto dRange = r.d.range;
  r.d.zeroOn = [dRange](double u, double v) -> Tri {
    // certified-yes when the range upper bound vanishes on every sub-cell;
    // certified-no when some sub-cell has positive lower bound
    int steps = 64;
    bool allZero = true;
    for (int i = 0; i < steps; ++i) {
      double x = u + (v - u) * i / steps, y = u + (v - u) * (i + 1) / steps;
      Interval rg = dRange(x, y);
      if (rg.lo > 0) return Tri::No;
      if (rg.hi > 0) allZero = false;
    }
    return allZero ? Tri::Yes : Tri::Unknown;
  };

  // atoms: positive part acts atom-wise
  for (const auto& a1 : nu1.atoms) {
    double m2 = nu2.atomMassAt(a1.x);
    double m = a1.mass - k * m2;
    if (m > 0) r.atoms.push_back({a1.x, m});
  }
  return r;
}

NumericMeasure asNumeric(const Measure& m) {
  NumericMeasure r;
  r.d.a = m.a();
  r.d.b = m.b();
  r.d.breaks = {m.a()};
  for (const auto& p : m.w.pieces) r.d.breaks.push_back(p.hi);
  WeightExpr w = m.w;
  r.d.eval = [w](double x) { return w.at(x); };
  r.d.range = [w](double u, double v) { return weightRange(w, u, v); };
  size_t n = r.d.breaks.size();
  r.d.tagLeft.resize(n - 1);
  r.d.tagRight.resize(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    r.d.tagLeft[i] = {SideTag::Exact, w.orderAt(r.d.breaks[i], false)};
    r.d.tagRight[i] = {SideTag::Exact, w.orderAt(r.d.breaks[i + 1], true)};
  }
  auto rng = r.d.range;
  r.d.zeroOn = [rng](double u, double v) -> Tri {
    Interval rg = rng(u, v);
    if (rg.hi == 0) return Tri::Yes;
    if (rg.lo > 0) return Tri::No;
    return Tri::Unknown;
  };
  r.atoms = m.atoms;
  return r;
}

}  // namespace sobmuck
