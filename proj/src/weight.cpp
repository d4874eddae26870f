#include "sobmuck/weight.hpp"

#include <cmath>

#include "sobmuck/measure.hpp"

namespace sobmuck {

namespace {

void validateFactor(const Factor& f, const Piece& p) {
  switch (f.kind) {
    case FactorKind::ExpNeg:
      if (f.rate > 0) throw SpecError("expneg factor requires beta >= 0");
      if (!(f.gamma > 0)) throw SpecError("expneg factor requires gamma > 0");
      break;
    case FactorKind::Envelope:
      if (!(f.C >= 1.0)) throw SpecError("envelope factor requires C >= 1");
      return;
    default: break;
  }
  if (f.kind == FactorKind::Envelope) return;
  if (f.center > p.lo && f.center < p.hi)
    throw SpecError("factor center must not lie inside the open piece");
  // Iterated-log factors must keep their argument sign fixed on the piece,
  // so the factor stays positive and finite away from its center.
  double dmax = std::max(std::abs(p.lo - f.center), std::abs(p.hi - f.center));
  double dmin = std::min(std::abs(p.lo - f.center), std::abs(p.hi - f.center));
  if (f.center >= p.lo && f.center <= p.hi) dmin = 0.0;
  if (f.kind == FactorKind::LogPower && f.e != 0.0) {
    if (!(dmax < 1.0 || dmin > 1.0))
      throw SpecError("log factor domain reaches distance 1 from its center");
  }
  if (f.kind == FactorKind::LogLogPower && f.e != 0.0) {
    if (!(dmax < std::exp(-1.0) || dmin > std::exp(1.0)))
      throw SpecError("loglog factor domain reaches distance 1/e from its center");
  }
}

}  // namespace

void validate(const WeightExpr& w) {
  if (!(w.a < w.b)) throw SpecError("support must be a nondegenerate interval");
  if (w.pieces.empty()) throw SpecError("weight needs at least one piece");
  double prev = w.a;
  for (const auto& p : w.pieces) {
    if (!samePoint(p.lo, prev)) throw SpecError("pieces must tile the support");
    if (!(p.lo < p.hi)) throw SpecError("empty piece");
    if (!(p.coeff > 0) && !p.zero) throw SpecError("piece coefficient must be positive");
    if (!p.zero)
      for (const auto& f : p.factors) validateFactor(f, p);
    prev = p.hi;
  }
  if (!samePoint(prev, w.b)) throw SpecError("pieces must tile the support");
}

void validate(const Measure& m) {
  validate(m.w);
  for (const auto& at : m.atoms) {
    if (!(at.mass > 0)) throw SpecError("atom mass must be positive");
    if (at.x < m.a() || at.x > m.b()) throw SpecError("atom outside support");
  }
  for (size_t i = 0; i < m.atoms.size(); ++i)
    for (size_t j = i + 1; j < m.atoms.size(); ++j)
      if (samePoint(m.atoms[i].x, m.atoms[j].x))
        throw SpecError("atom abscissas must be pairwise distinct");
}

Measure restrict(const Measure& m, double lo, double hi, bool closedLeft,
                 bool closedRight) {
  Measure r;
  r.w.a = lo;
  r.w.b = hi;
  for (const auto& p : m.w.pieces) {
    double u = std::max(p.lo, lo), v = std::min(p.hi, hi);
    if (u >= v) continue;
    Piece q = p;
    q.lo = u;
    q.hi = v;
    r.w.pieces.push_back(q);
  }
  if (r.w.pieces.empty()) {
    Piece q;
    q.lo = lo;
    q.hi = hi;
    q.zero = true;
    r.w.pieces = {q};
  }
  for (const auto& at : m.atoms) {
    bool in = (at.x > lo && at.x < hi) || (closedLeft && samePoint(at.x, lo)) ||
              (closedRight && samePoint(at.x, hi));
    if (in) r.atoms.push_back(at);
  }
  return r;
}

Measure reflect(const Measure& m) {
  Measure r;
  r.w.a = -m.b();
  r.w.b = -m.a();
  for (auto it = m.w.pieces.rbegin(); it != m.w.pieces.rend(); ++it) {
    Piece q = *it;
    q.lo = -it->hi;
    q.hi = -it->lo;
    for (auto& f : q.factors) f.center = -f.center;
    r.w.pieces.push_back(q);
  }
  for (const auto& at : m.atoms) r.atoms.push_back({-at.x, at.mass});
  return r;
}

Measure scaleMass(const Measure& m, double c) {
  Measure r = m;
  for (auto& p : r.w.pieces)
    if (!p.zero) p.coeff *= c;
  for (auto& at : r.atoms) at.mass *= c;
  return r;
}

double density_at(const Measure& m, double x) { return m.w.at(x); }
double density_at(const NumericMeasure& m, double x) {
  if (x < m.a() || x > m.b()) throw PreconditionError("point outside support");
  return m.d.eval(x);
}

}  // namespace sobmuck
