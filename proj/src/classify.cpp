#include "sobmuck/classify.hpp"

#include <algorithm>
#include <cmath>

#include "sobmuck/integrate.hpp"

namespace sobmuck {

namespace {

double qTilde(double p) { return 1.0 / (p - 1.0); }

// One-sided non-integrability of w1^{-q} at x; outside the weight's support
// the weight is zero, whose reciprocal is never integrable.
bool nonIntegrable(const WeightExpr& w, double x, bool fromLeft, double q) {
  return integrability(w, x, fromLeft, q) == Tri::No;
}

bool zeroAeOn(const WeightExpr& w, double u, double v) {
  for (const auto& p : w.pieces) {
    if (std::min(v, p.hi) - std::max(u, p.lo) > 1e-15 && !p.zero) return false;
  }
  return true;
}

std::vector<double> interiorBoundaries(const WeightExpr& w, double lo, double hi) {
  std::vector<double> xs;
  for (const auto& p : w.pieces)
    for (double x : {p.lo, p.hi})
      if (x > lo + 1e-15 && x < hi - 1e-15) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return samePoint(a, b); }),
           xs.end());
  return xs;
}

}  // namespace

RegClass reg_interval(const Measure& mu1, double p) {
  if (!(p > 1.0)) throw PreconditionError("p must lie in (1, infinity)");
  double q = qTilde(p);
  const WeightExpr& w = mu1.w;
  for (double x : interiorBoundaries(w, w.a, w.b)) {
    if (nonIntegrable(w, x, true, q) || nonIntegrable(w, x, false, q))
      throw NotRegOnWholeInterval(
          "w1^{-1/(p-1)} not locally integrable at interior point " +
          std::to_string(x));
  }
  for (const auto& pc : w.pieces)
    if (pc.zero)
      throw NotRegOnWholeInterval("w1 vanishes on a piece; reciprocal not integrable");
  bool openLeft = nonIntegrable(w, w.a, false, q);
  bool openRight = nonIntegrable(w, w.b, true, q);
  if (openLeft && openRight) return RegClass::OpenOpen;
  if (openLeft) return RegClass::OpenClosed;
  if (openRight) return RegClass::ClosedOpen;
  return RegClass::ClosedClosed;
}

DecomposeOutcome piecewise_decompose(const Measure& mu1, double p,
                                     const Measure* hullFallback) {
  if (!(p > 1.0)) throw PreconditionError("p must lie in (1, infinity)");
  double q = qTilde(p);
  const WeightExpr& w = mu1.w;

  // convex hull of the support
  double lo = kInf, hi = -kInf;
  for (const auto& pc : w.pieces)
    if (!pc.zero) {
      lo = std::min(lo, pc.lo);
      hi = std::max(hi, pc.hi);
    }
  for (const auto& at : mu1.atoms) {
    lo = std::min(lo, at.x);
    hi = std::max(hi, at.x);
  }
  bool extended = false;
  if (!(lo < hi)) {
    if (!hullFallback) {
      DecomposeOutcome out;
      out.reason = "degenerate convex hull of supp mu1 (no reference measure)";
      return out;
    }
    lo = std::isfinite(lo) ? std::min(lo, hullFallback->a()) : hullFallback->a();
    hi = std::isfinite(hi) ? std::max(hi, hullFallback->b()) : hullFallback->b();
    extended = true;
    if (!(lo < hi)) {
      DecomposeOutcome out;
      out.reason = "degenerate hull even after extension";
      return out;
    }
  }

  // interior candidates: both-sided non-integrability points
  std::vector<double> cand;
  for (double x : interiorBoundaries(w, lo, hi))
    if (nonIntegrable(w, x, true, q) && nonIntegrable(w, x, false, q))
      cand.push_back(x);

  // condition (c): drop candidates with w1 = 0 a.e. between their neighbors
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < cand.size(); ++i) {
      double prev = i == 0 ? lo : cand[i - 1];
      double next = i + 1 == cand.size() ? hi : cand[i + 1];
      if (zeroAeOn(w, prev, next)) {
        cand.erase(cand.begin() + i);
        changed = true;
        break;
      }
    }
  }

  RegData rd;
  rd.hullExtended = extended;
  rd.params.push_back(lo);
  rd.params.insert(rd.params.end(), cand.begin(), cand.end());
  rd.params.push_back(hi);

  // classify pieces: condition (b)
  for (size_t j = 1; j < rd.params.size(); ++j) {
    double u = rd.params[j - 1], v = rd.params[j];
    if (zeroAeOn(w, u, v)) continue;  // finite Dirac combination piece
    bool locInt = true;
    std::string bad;
    for (double x : interiorBoundaries(w, u, v))
      if (nonIntegrable(w, x, true, q) || nonIntegrable(w, x, false, q)) {
        locInt = false;
        bad = std::to_string(x);
        break;
      }
    if (locInt) {
      // partial zero pieces inside break local integrability too
      for (const auto& pc : w.pieces)
        if (pc.zero && std::min(v, pc.hi) - std::max(u, pc.lo) > 1e-15) {
          locInt = false;
          bad = "zero subpiece";
          break;
        }
    }
    if (!locInt) {
      DecomposeOutcome out;
      out.reason = "piece (" + std::to_string(u) + ", " + std::to_string(v) +
                   ") has one-sided non-integrability at " + bad;
      return out;
    }
    rd.J.push_back(static_cast<int>(j));
  }

  // H: atoms over two-sided non-integrable points
  for (const auto& at : mu1.atoms)
    if (nonIntegrable(w, at.x, true, q) && nonIntegrable(w, at.x, false, q))
      rd.H.push_back(at.x);

  // strongly: wherever the 1/(p-1) reciprocal power is non-integrable at a
  // parameter side, the 1/p power must be too
  rd.strongly = true;
  for (double aj : rd.params)
    for (bool fromLeft : {true, false})
      if (nonIntegrable(w, aj, fromLeft, q) &&
          !nonIntegrable(w, aj, fromLeft, 1.0 / p))
        rd.strongly = false;

  MonotoneResult mono = is_piecewise_monotone(mu1);
  rd.monotone = mono.verdict == MonotoneVerdict::Yes;
  if (rd.monotone) rd.monotoneParams = mono.params;

  DecomposeOutcome out;
  out.data = rd;
  return out;
}

MonotoneResult is_piecewise_monotone(const Measure& mu1) {
  // every weight in the symbolic class is eventually monotone near each
  // factor center and comparable to a constant in between, so monotone
  // comparability always holds; the parameters witness a partition where
  // each open piece carries centered factors at one end at most
  MonotoneResult r;
  r.verdict = MonotoneVerdict::Yes;
  const WeightExpr& w = mu1.w;
  std::vector<double> ps{w.a, w.b};
  for (const auto& pc : w.pieces) {
    for (double x : {pc.lo, pc.hi})
      if (x > w.a && x < w.b) ps.push_back(x);
    if (pc.zero) continue;
    bool atLo = false, atHi = false;
    for (const auto& f : pc.factors) {
      if (f.kind == FactorKind::Envelope) continue;
      if (samePoint(f.center, pc.lo)) atLo = true;
      if (samePoint(f.center, pc.hi)) atHi = true;
    }
    if (atLo && atHi) ps.push_back(0.5 * (pc.lo + pc.hi));
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end(),
                       [](double a, double b) { return samePoint(a, b); }),
           ps.end());
  r.params = ps;
  return r;
}

MonotoneResult is_piecewise_monotone(const NumericMeasure&) {
  return MonotoneResult{};  // Unknown by policy: sampling cannot certify
}

ClassCResult class_c(const WeightExpr& w1, const WeightExpr& w0, double x,
                     bool fromLeft) {
  ClassCResult r;
  OrderTuple o1 = w1.orderAt(x, fromLeft);
  OrderTuple o0 = w0.orderAt(x, fromLeft);
  if (o1.zero && o0.zero) {
    // both vanish identically: 0 <= k * 0 for every k
    r.verdict = ClassCResult::LimsupFinite;
    r.witnessBound = 0.0;
    return r;
  }
  int cmp = orderCompare(o1, o0);
  if (cmp > 0) {
    r.verdict = ClassCResult::LimitInfinity;
    return r;
  }
  r.verdict = ClassCResult::LimsupFinite;
  if (cmp < 0) {
    r.witnessBound = 0.0;
    return r;
  }
  // equal orders: ratio bounded by coefficient and envelope constants
  double probe =
      fromLeft ? x - 1e-13 * (1 + std::abs(x)) : x + 1e-13 * (1 + std::abs(x));
  const Piece& p1 = w1.pieces[w1.pieceIndexAt(std::clamp(probe, w1.a, w1.b))];
  const Piece& p0 = w0.pieces[w0.pieceIndexAt(std::clamp(probe, w0.a, w0.b))];
  Interval e1 = pieceEnvelope(p1), e0 = pieceEnvelope(p0);
  r.witnessBound = p1.coeff * e1.hi / (p0.coeff * e0.lo);
  return r;
}

}  // namespace sobmuck
