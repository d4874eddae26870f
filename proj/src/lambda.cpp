#include "sobmuck/lambda.hpp"

#include <algorithm>
#include <cmath>

#include "sobmuck/classify.hpp"
#include "sobmuck/integrate.hpp"

namespace sobmuck {

namespace {

double atomMass(const std::vector<Atom>& atoms, double x) {
  for (const auto& a : atoms)
    if (samePoint(a.x, x)) return a.mass;
  return 0.0;
}

bool symbolicallyFiniteDensity(const WeightExpr& w) {
  for (const auto& p : w.pieces) {
    if (p.zero) continue;
    for (double x : {p.lo, p.hi})
      if (orderIntegrable(pieceOrderAt(p, x)) == Tri::No) return false;
  }
  return true;
}

double supPow(const WeightExpr& w, double s, double u, double v) {
  double hi = 0;
  for (const auto& p : w.pieces) {
    double x = std::max(u, p.lo), y = std::min(v, p.hi);
    if (x >= y) continue;
    if (p.zero) return s < 0 ? kInf : hi;
    hi = std::max(hi, pieceRange(piecePow(p, s), x, y).hi);
  }
  return hi;
}

std::vector<double> boundaryPoints(const WeightExpr& w) {
  std::vector<double> xs{w.a};
  for (const auto& p : w.pieces) xs.push_back(p.hi);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return samePoint(a, b); }),
           xs.end());
  return xs;
}

struct WScan {
  double cstar;   // first point past which W is infinite
  int flavor;     // 0 none, 1 divergence just right of cstar (W(cstar) finite),
                  // 2 divergence at cstar from the left (W(cstar) infinite)
};

WScan scanW(const WeightExpr& w2, double q) {
  WScan s{w2.b, 0};
  for (double x : boundaryPoints(w2)) {
    if (x > w2.a && integrability(w2, x, true, q) == Tri::No) {
      s.cstar = x;
      s.flavor = 2;
      return s;
    }
    if (x < w2.b && integrability(w2, x, false, q) == Tri::No) {
      s.cstar = x;
      s.flavor = 1;
      return s;
    }
  }
  return s;
}

bool wIntegrableUpTo(const WeightExpr& w2, double q, double r0) {
  WScan s = scanW(w2, q);
  if (s.flavor == 0) return true;
  if (s.cstar > r0 + 1e-15) return true;
  return samePoint(s.cstar, r0) && s.flavor == 1;
}

struct FinOut {
  Tri fin = Tri::Unknown;
  std::optional<DivergenceCert> cert;
};

FinOut lambdaFiniteness(const TailView& nu1, const WeightExpr& w2, double p,
                        bool prime) {
  FinOut out;
  double q = 1.0 / (p - 1.0), P = p - 1.0;
  double B = w2.b;
  WScan sc = scanW(w2, q);

  auto tagVerdict = [&](double x) -> Tri {
    auto tag = nu1.tagAt(x, /*fromLeft=*/true);
    if (!tag) return Tri::Unknown;
    if (tag->kind == SideTag::Zero) return Tri::Yes;
    OrderTuple tailOrder = orderAntiderivative(tag->order);
    OrderTuple growth =
        orderAntiderivative(orderPower(w2.orderAt(x, true), -q));
    int sign = orderLimitSign(orderProduct(tailOrder, orderPower(growth, P)));
    if (sign <= 0) return Tri::Yes;
    return tag->kind == SideTag::Exact ? Tri::No : Tri::Unknown;
  };

  if (sc.flavor == 0) {
    out.fin = Tri::Yes;
    return out;
  }
  if (samePoint(sc.cstar, B) && sc.flavor == 2) {
    // W finite on (A,B), divergent at B itself
    if (!prime && atomMass(nu1.atoms, B) > 0) {
      out.fin = Tri::No;
      out.cert = DivergenceCert{B, true, orderPower(w2.orderAt(B, true), -q),
                                "atom at b against divergent W"};
      return out;
    }
    out.fin = tagVerdict(B);
    if (out.fin == Tri::No)
      out.cert = DivergenceCert{B, true, orderPower(w2.orderAt(B, true), -q),
                                "nu1 tail dominates W growth at b"};
    return out;
  }

  // interior divergence of W at cstar
  double c = sc.cstar;
  bool massAtoms = false;
  for (const auto& a : nu1.atoms) {
    bool inOpen = a.x > c + 1e-15 && a.x < B - 1e-15;
    bool atB = samePoint(a.x, B) && !prime;
    if (inOpen || atB) massAtoms = true;
  }
  Tri zero = nu1.zeroOn(c, B);
  if (massAtoms || zero == Tri::No) {
    out.fin = Tri::No;
    out.cert = DivergenceCert{c, sc.flavor == 2, OrderTuple{},
                              "nu1 mass beyond divergence point of W"};
    return out;
  }
  if (zero == Tri::Unknown) {
    out.fin = Tri::Unknown;
    return out;
  }
  if (sc.flavor == 1) {
    out.fin = Tri::Yes;  // W bounded on (A, cstar], no nu1 mass beyond
    return out;
  }
  // flavor 2: W(r) -> inf as r -> cstar-
  if (atomMass(nu1.atoms, c) > 0) {
    out.fin = Tri::No;
    out.cert = DivergenceCert{c, true, orderPower(w2.orderAt(c, true), -q),
                              "atom at divergence point of W"};
    return out;
  }
  out.fin = tagVerdict(c);
  if (out.fin == Tri::No)
    out.cert = DivergenceCert{c, true, orderPower(w2.orderAt(c, true), -q),
                              "nu1 tail dominates W growth"};
  return out;
}

// Upper bound of sup over r in (r0, e) of nu1([r,e)) * W(r)^{p-1} when
// w2^{-1/(p-1)} diverges exactly at e and nu1 carries no mass at or past e.
// Geometric subzones with crude tail-times-W bounds, closed by uniform
// power-bound majorants once the symbolic margin is strictly positive.
std::optional<double> endZoneSup(const TailView& nu1, const WeightExpr& w2, double e,
                                 double r0, double W0hi, double p) {
  double P = p - 1.0, s = -1.0 / P;
  double probe = e - 1e-14 * (1 + std::abs(e));
  const Piece& p2 = w2.pieces[w2.pieceIndexAt(std::clamp(probe, w2.a, w2.b))];
  if (p2.zero) return std::nullopt;
  Piece p2s = piecePow(p2, s);
  if (r0 < p2.lo) return std::nullopt;

  // symbolic power margin of the product order
  double margin;
  {
    auto tag = nu1.tagAt(e, true);
    if (!tag) return std::nullopt;
    OrderTuple tOrd = tag->kind == SideTag::Zero ? OrderTuple::zeroWeight()
                                                 : orderAntiderivative(tag->order);
    if (tOrd.zero) return 0.0;
    OrderTuple gOrd = orderAntiderivative(orderPower(w2.orderAt(e, true), s));
    margin = tOrd.pw[0] + P * gOrd.pw[0];
  }

  double zone = 0.0;
  double d = e - r0;
  double Whi = W0hi;
  Enclosure Tcur = nu1.densInt(std::max(r0, nu1.A), std::min(e, nu1.B), 1e-6);
  if (!Tcur.finite()) return std::nullopt;
  double eta = margin > 0 ? margin / (2.0 * (1.0 + P)) : 0.0;

  std::optional<double> lastValid;
  for (int j = 0; j < 160; ++j) {
    double dn = 0.5 * d;
    double rNew = e - dn;
    if (!(rNew > e - d && rNew < e)) break;  // representability floor
    PieceIntegral seg =
        integratePiece(p2s, e - d, rNew, 1e-6, nullptr, QuadBudget{3000, 300});
    if (seg.div) break;  // resolution floor reached; the last closure stands
    double WhiNew = Whi + seg.bracket.hi;
    zone = std::max(zone, Tcur.hi * std::pow(WhiNew, P));
    Enclosure Tnext = nu1.densInt(std::max(rNew, nu1.A), std::min(e, nu1.B), 1e-6);
    d = dn;
    Whi = WhiNew;
    Tcur = Tnext;
    if (margin > 0 && d < 0.05) {
      auto tb = nu1.tailPowerBound(e, true, eta, d);
      auto gb = shapeGrowthPowerBound(p2s, e, false, eta, d);
      if (tb && gb && d <= tb->validBelow && d <= gb->validBelow) {
        double ex = tb->e + P * gb->e;
        if (ex > 0) {
          double twoP = std::pow(2.0, P);
          double closure = twoP * (Tcur.hi * std::pow(Whi, P) +
                                   tb->c * std::pow(gb->c, P) * std::pow(d, ex));
          lastValid = std::max(zone, closure);
          if (closure <= 1e-6 * (1.0 + zone)) return lastValid;
        }
      }
    }
  }
  return lastValid;
}

}  // namespace

TailView viewOf(const Measure& m) {
  TailView v;
  v.A = m.a();
  v.B = m.b();
  v.atoms = m.atoms;
  for (const auto& p : m.w.pieces) {
    if (p.lo > v.A) v.hints.push_back(p.lo);
  }
  WeightExpr w = m.w;
  v.densInt = [w](double u, double v2, double tol) -> Enclosure {
    Enclosure total;
    for (const auto& p : w.pieces) {
      double x = std::max(u, p.lo), y = std::min(v2, p.hi);
      if (x >= y || p.zero) continue;
      PieceIntegral r = integratePiece(p, x, y, tol, nullptr, QuadBudget{8000, 360});
      if (r.div) {
        Enclosure e{total.lo, kInf};
        e.diverged = r.div;
        return e;
      }
      total.lo += r.bracket.lo;
      total.hi += r.bracket.hi;
    }
    return total;
  };
  v.densSup = [w](double u, double v2) { return densitySupUpper(w, u, v2); };
  v.tagAt = [w](double x, bool fromLeft) -> std::optional<SideTag> {
    OrderTuple o = w.orderAt(x, fromLeft);
    if (o.zero) return SideTag{SideTag::Zero, o};
    return SideTag{SideTag::Exact, o};
  };
  v.zeroOn = [w](double u, double v2) -> Tri {
    for (const auto& p : w.pieces)
      if (std::min(v2, p.hi) - std::max(u, p.lo) > 1e-15 && !p.zero) return Tri::No;
    return Tri::Yes;
  };
  v.tailPowerBound = [w](double e, bool fromLeft, double eta,
                         double dv) -> std::optional<PowerBound> {
    if (fromLeft ? e <= w.a : e >= w.b) return PowerBound{0.0, 1.0, dv};
    double probe = fromLeft ? e - 1e-14 * (1 + std::abs(e)) : e + 1e-14 * (1 + std::abs(e));
    const Piece& pc = w.pieces[w.pieceIndexAt(std::clamp(probe, w.a, w.b))];
    double dcap = std::min(dv, fromLeft ? e - pc.lo : pc.hi - e);
    auto pb = shapeTailPowerBound(pc, e, !fromLeft, eta, dcap);
    if (pb) return pb;
    // bounded-density fallback
    double u = fromLeft ? e - dcap : e;
    double vv = fromLeft ? e : e + dcap;
    double sup = densitySupUpper(w, u, vv);
    if (std::isfinite(sup)) return PowerBound{sup, 1.0, dcap};
    return std::nullopt;
  };
  return v;
}

TailView viewOf(const NumericMeasure& m) {
  TailView v;
  v.A = m.a();
  v.B = m.b();
  v.atoms = m.atoms;
  for (double x : m.d.breaks)
    if (x > v.A && x < v.B) v.hints.push_back(x);
  NumericDensity d = m.d;
  v.densInt = [d](double u, double v2, double tol) -> Enclosure {
    PieceIntegral r =
        integrateRanged(d.range, d.eval, u, v2, d.guards, tol, QuadBudget{8000, 250});
    Enclosure e{r.bracket.lo, r.bracket.hi};
    return e;
  };
  v.densSup = [d](double u, double v2) { return d.range(u, v2).hi; };
  v.tagAt = [d](double x, bool fromLeft) -> std::optional<SideTag> {
    for (size_t i = 0; i + 1 < d.breaks.size(); ++i) {
      if (fromLeft && samePoint(d.breaks[i + 1], x)) return d.tagRight[i];
      if (!fromLeft && samePoint(d.breaks[i], x)) return d.tagLeft[i];
    }
    return std::nullopt;
  };
  v.zeroOn = d.zeroOn;
  v.tailPowerBound = [d](double e, bool fromLeft, double eta,
                         double dv) -> std::optional<PowerBound> {
    for (const auto& g : d.guards)
      if (samePoint(g.x, e) && g.fromLeft == fromLeft)
        return shapeTailPowerBound(g.dominator, e, !fromLeft, eta, dv);
    double u = fromLeft ? e - dv : e;
    double vv = fromLeft ? e : e + dv;
    double sup = d.range(u, vv).hi;
    if (std::isfinite(sup)) return PowerBound{sup, 1.0, dv};
    return std::nullopt;
  };
  return v;
}

LambdaResult lambdaCoreB(const TailView& nu1, const WeightExpr& w2, double p, int N,
                         bool prime, double tol) {
  if (!(p > 1.0)) throw PreconditionError("p must lie in (1, infinity)");
  double P = p - 1.0, s = -1.0 / P;
  double A = w2.a, B = w2.b;

  FinOut fin = lambdaFiniteness(nu1, w2, p, prime);

  std::vector<double> extra = nu1.hints;
  for (const auto& a : nu1.atoms) extra.push_back(a.x);
  CumGrid g = cum_power_grid(w2, s, A, B, N, tol, extra);
  size_t n = g.nodes.size();

  // nu1 tails (closed at the node, closed at B unless prime)
  std::vector<Enclosure> tail(n), segs(n > 0 ? n - 1 : 0);
  double segTol = tol / static_cast<double>(n);
  {
    double atomB = atomMass(nu1.atoms, B);
    Enclosure cur = prime ? Enclosure{} : Enclosure{atomB, atomB};
    tail[n - 1] = cur;
    for (int i = static_cast<int>(n) - 2; i >= 0; --i) {
      segs[i] = nu1.densInt(std::max(g.nodes[i], nu1.A),
                            std::min(g.nodes[i + 1], nu1.B), segTol);
      // atoms sit on grid nodes; tail[i] owns the atom at node_i
      double amI = atomMass(nu1.atoms, g.nodes[i]);
      tail[i].lo = tail[i + 1].lo + segs[i].lo + amI;
      tail[i].hi = tail[i + 1].hi + segs[i].hi + amI;
      if (segs[i].diverged && !tail[i].diverged) tail[i].diverged = segs[i].diverged;
    }
  }

  double bestLo = 0.0, arg = 0.5 * (A + B);
  for (size_t i = 1; i + 1 < n; ++i) {
    if (g.infiniteAt(static_cast<int>(i))) break;
    double v = mul0(tail[i].lo, std::pow(g.W[i].lo, P));
    if (v > bestLo) {
      bestLo = v;
      arg = g.nodes[i];
    }
  }
  double atomB = prime ? 0.0 : atomMass(nu1.atoms, B);
  if (atomB > 0 && n >= 1) {
    double WB = g.W[n - 1].lo;  // finite part is a valid lower bound of W(B)
    double v = mul0(atomB, std::pow(WB, P));
    if (v > bestLo) {
      bestLo = v;
      arg = g.nodes[n - 1];
    }
  }

  // upper bound of the sup over one grid cell (open interior)
  auto cellUpper = [&](size_t i) -> double {
    double h = g.nodes[i + 1] - g.nodes[i];
    double Wnext = g.infiniteAt(static_cast<int>(i) + 1) ? kInf : g.W[i + 1].hi;
    double tailOpenHi = tail[i + 1].hi + segs[i].hi;  // nu1((node_i, B])
    double cellHi = mul0(tailOpenHi, std::isinf(Wnext) ? kInf : std::pow(Wnext, P));
    if (!std::isinf(Wnext)) {
      double wbar = nu1.densSup(g.nodes[i], g.nodes[i + 1]);
      double vbar = supPow(w2, s, g.nodes[i], g.nodes[i + 1]);
      double Wl = g.W[i].hi;
      double T = tail[i + 1].hi;
      if (std::isfinite(wbar) && std::isfinite(vbar)) {
        auto val = [&](double u) {
          return (T + (h - u) * wbar) * std::pow(Wl + u * vbar, P);
        };
        double refined = std::max(val(0.0), val(h));
        if (wbar > 0 && vbar > 0) {
          double ustar = (P * vbar * (T + h * wbar) - wbar * Wl) / (p * wbar * vbar);
          if (ustar > 0 && ustar < h) refined = std::max(refined, val(ustar));
        }
        cellHi = std::min(cellHi, refined);
      }
    }
    return cellHi;
  };

  double hiTot = bestLo;
  int zoneCell = -1;  // cell just before W turns infinite, carrying nu1 mass
  for (size_t i = 0; i + 1 < n; ++i) {
    double cellHi = cellUpper(i);
    if (std::isinf(cellHi) && static_cast<int>(i) + 1 == g.firstInfinite)
      zoneCell = static_cast<int>(i);
    hiTot = std::max(hiTot, cellHi);
  }

  // W diverges inside the last resolvable cell but the sup is symbolically
  // finite there: close that cell with the end-zone majorant
  if (fin.fin == Tri::Yes && std::isinf(hiTot) && zoneCell >= 0 &&
      tail[zoneCell + 1].hi == 0.0) {
    double e = g.nodes[zoneCell + 1];
    auto zs = endZoneSup(nu1, w2, e, g.nodes[zoneCell], g.W[zoneCell].hi, p);
    if (zs) {
      double hiFinite = std::max(bestLo, *zs);
      for (size_t i = 0; i + 1 < n; ++i) {
        if (static_cast<int>(i) == zoneCell) continue;
        hiFinite = std::max(hiFinite, cellUpper(i));
      }
      hiTot = hiFinite;
    }
  }

  LambdaResult res;
  res.primeVariant = prime;
  res.endpoint = Endpoint::B;
  res.argmax_r = arg;
  res.finite = fin.fin;
  res.cert = fin.cert;
  res.enclosure.lo = bestLo;
  res.enclosure.hi = std::max(hiTot, bestLo);
  if (fin.fin == Tri::No) {
    res.enclosure.hi = kInf;
    res.enclosure.diverged = fin.cert;
  } else if (fin.fin == Tri::Yes && std::isinf(res.enclosure.hi)) {
    res.finite = Tri::Unknown;  // engine says finite; grid could not confirm
  }
  return res;
}

namespace {

void requireFiniteNu1(const Measure& nu1) {
  if (!symbolicallyFiniteDensity(nu1.w))
    throw PreconditionError("nu1 must be a finite measure");
}

}  // namespace

LambdaResult lambda_b(const Measure& nu1, const Measure& nu2, double p, int N) {
  requireFiniteNu1(nu1);
  return lambdaCoreB(viewOf(nu1), nu2.w, p, N, false);
}

LambdaResult lambda_prime_b(const Measure& nu1, const Measure& nu2, double p, int N) {
  requireFiniteNu1(nu1);
  return lambdaCoreB(viewOf(nu1), nu2.w, p, N, true);
}

LambdaResult lambda_a(const Measure& nu1, const Measure& nu2, double p, int N) {
  requireFiniteNu1(nu1);
  LambdaResult r = lambdaCoreB(viewOf(reflect(nu1)), reflect(nu2).w, p, N, false);
  r.endpoint = Endpoint::A;
  r.argmax_r = -r.argmax_r;
  return r;
}

bool comp_lambdas_check(const Measure& nu1, const Measure& nu2, double p, int N) {
  LambdaResult L = lambda_b(nu1, nu2, p, N);
  LambdaResult Lp = lambda_prime_b(nu1, nu2, p, N);

  double P = p - 1.0, s = -1.0 / P;
  Enclosure Wfull;
  bool wDiv = false;
  for (const auto& pc : nu2.w.pieces) {
    if (pc.zero) {
      wDiv = true;
      break;
    }
    PieceIntegral r = integratePiece(piecePow(pc, s), pc.lo, pc.hi, 1e-8);
    if (r.div) {
      wDiv = true;
      break;
    }
    Wfull.lo += r.bracket.lo;
    Wfull.hi += r.bracket.hi;
  }
  double atomB = 0;
  for (const auto& a : nu1.atoms)
    if (samePoint(a.x, nu1.b())) atomB = a.mass;
  double atLo = wDiv ? (atomB > 0 ? kInf : 0.0) : mul0(atomB, std::pow(Wfull.lo, P));
  double atHi = wDiv ? (atomB > 0 ? kInf : 0.0) : mul0(atomB, std::pow(Wfull.hi, P));
  bool atDivergent = wDiv && atomB > 0;

  // max{Lambda', atom term} <= Lambda <= Lambda' + atom term, at lo/hi level
  if (std::max(Lp.enclosure.lo, atLo) > L.enclosure.hi * (1 + 1e-9) + 1e-12)
    return false;
  double rhs = Lp.enclosure.hi + atHi;
  if (L.enclosure.lo > rhs * (1 + 1e-9) + 1e-12) return false;
  if (L.finite == Tri::Yes && (Lp.finite == Tri::No || atDivergent)) return false;
  if (L.finite == Tri::No && Lp.finite == Tri::Yes && !atDivergent) return false;
  return true;
}

EquivVerdict restricted_lambda_equiv(const Measure& nu1, const Measure& nu2, double p,
                                     double r0, int N) {
  requireFiniteNu1(nu1);
  double q = 1.0 / (p - 1.0);
  if (!(r0 > nu2.a() && r0 < nu2.b()))
    throw PreconditionError("r0 must lie in the open support");
  if (!wIntegrableUpTo(nu2.w, q, r0))
    throw PreconditionError("w2^{-1/(p-1)} not integrable on [a, r0]");
  LambdaResult full = lambda_b(nu1, nu2, p, N);
  Measure n1r = restrict(nu1, r0, nu1.b(), true, true);
  Measure n2r = restrict(nu2, r0, nu2.b(), true, true);
  LambdaResult part = lambdaCoreB(viewOf(n1r), n2r.w, p, N, false);
  if (full.finite == Tri::Yes && part.finite == Tri::Yes) return EquivVerdict::BothFinite;
  if (full.finite == Tri::No && part.finite == Tri::No) return EquivVerdict::BothInfinite;
  return EquivVerdict::Unknown;
}

bool niffPattern(const Measure& nu1, const Measure& nu2, const Measure& nu3, double p,
                 Endpoint end) {
  if (end == Endpoint::A)
    return niffPattern(reflect(nu1), reflect(nu2), reflect(nu3), p, Endpoint::B);
  double q = 1.0 / (p - 1.0);
  double B = nu1.b();
  if (!symbolicallyFiniteDensity(nu2.w)) return false;
  if (integrability(nu3.w, B, true, q) != Tri::No) return false;
  if (!(atomMass(nu1.atoms, B) > 0)) return false;
  if (atomMass(nu2.atoms, B) > 0) return false;
  return true;
}

ThreeMeasureOutcome three_measure_condition(const Measure& nu1, const Measure& nu2,
                                            const Measure& nu3, double p,
                                            Endpoint end, int N) {
  if (end == Endpoint::A) {
    ThreeMeasureOutcome o = three_measure_condition(reflect(nu1), reflect(nu2),
                                                    reflect(nu3), p, Endpoint::B, N);
    if (o.cert) {
      o.cert->lambda.endpoint = Endpoint::A;
      o.cert->lambda.argmax_r = -o.cert->lambda.argmax_r;
    }
    return o;
  }
  requireFiniteNu1(nu1);
  double q = 1.0 / (p - 1.0);
  double B = nu1.b();
  ThreeMeasureOutcome out;
  std::vector<Hypothesis> hyps;

  if (niffPattern(nu1, nu2, nu3, p, Endpoint::B)) {
    out.kind = ThreeMeasureOutcome::NotFound;
    out.detail =
        "negative pattern: nu1({b})>0, nu2({b})=0, w3^{-1/(p-1)} not integrable "
        "at b; Lambda((nu1-k nu2)+, nu3) is infinite for every k";
    return out;
  }

  ClassCResult cc = class_c(nu1.w, nu2.w, B, /*fromLeft=*/true);
  if (cc.verdict == ClassCResult::NotInClass) {
    out.kind = ThreeMeasureOutcome::Unknown;
    out.detail = "(w1, w2) not in class c at b";
    return out;
  }

  double nu2AtomB = atomMass(nu2.atoms, B);
  if (cc.verdict == ClassCResult::LimitInfinity) {
    hyps.push_back({"ratio w1/w2 -> infinity at b", true, ""});
    hyps.push_back({"(nu2)_s vanishes near b", nu2AtomB == 0, ""});
    LambdaResult L = lambdaCoreB(viewOf(nu1), nu3.w, p, N, false);
    if (L.finite == Tri::Yes) {
      ThreeMeasureCert cert;
      cert.k = 0.0;
      cert.lambda = L;
      cert.route = ThreeMeasureCert::RatioLimitInfinite;
      cert.hypotheses = hyps;
      out.kind = ThreeMeasureOutcome::Holds;
      out.cert = cert;
      return out;
    }
    if (L.finite == Tri::No && nu2AtomB == 0) {
      out.kind = ThreeMeasureOutcome::NotFound;
      out.detail =
          "w1/w2 -> infinity at b, so the positive part keeps the order of nu1 "
          "near b for every k, and Lambda(nu1, nu3) is infinite";
      return out;
    }
  } else {
    hyps.push_back({"limsup w1/w2 finite at b",
                    true,
                    cc.witnessBound ? std::to_string(*cc.witnessBound) : ""});
    double nu1AtomB = atomMass(nu1.atoms, B);
    bool atomsDominated = nu1AtomB == 0 || nu2AtomB > 0;
    hyps.push_back({"(nu1)_s <= c0 (nu2)_s near b", atomsDominated, ""});
    if (atomsDominated) {
      double bound = cc.witnessBound.value_or(0.0);
      double k0 = bound > 0 ? 2.0 * bound : 1.0;
      double c0 = nu1AtomB > 0 ? nu1AtomB / nu2AtomB : 0.0;
      double k = std::max(k0, c0);
      NumericMeasure pp = positive_part(nu1, k, nu2);
      bool vanishes = atomMass(pp.atoms, B) == 0;
      if (!pp.d.tagRight.empty())
        vanishes = vanishes && pp.d.tagRight.back().kind == SideTag::Zero;
      hyps.push_back({"(nu1 - k nu2)_+ vanishes near b", vanishes, "k=" + std::to_string(k)});
      // local integrability of w3^{-1/(p-1)} on [a, r] for every r < b
      WScan sc = scanW(nu3.w, q);
      bool w3loc = sc.flavor == 0 || samePoint(sc.cstar, B);
      hyps.push_back({"w3^{-1/(p-1)} integrable on [a,r] for r < b", w3loc, ""});
      if (vanishes && w3loc) {
        LambdaResult L = lambdaCoreB(viewOf(pp), nu3.w, p, N, false);
        ThreeMeasureCert cert;
        cert.k = k;
        cert.lambda = L;
        cert.route = ThreeMeasureCert::RatioLimsupFinite;
        cert.hypotheses = hyps;
        out.kind = ThreeMeasureOutcome::Holds;
        out.cert = cert;
        return out;
      }
    }
  }

  // doubling scan fallback
  std::vector<double> ks{0.0};
  for (int e = 0; e <= 16; ++e) ks.push_back(std::ldexp(1.0, e));
  for (double k : ks) {
    NumericMeasure pp = positive_part(nu1, k, nu2);
    LambdaResult L = lambdaCoreB(viewOf(pp), nu3.w, p, N, false);
    if (L.finite == Tri::Yes) {
      ThreeMeasureCert cert;
      cert.k = k;
      cert.lambda = L;
      cert.route = ThreeMeasureCert::Direct;
      cert.hypotheses = hyps;
      out.kind = ThreeMeasureOutcome::Holds;
      out.cert = cert;
      return out;
    }
  }

  // limit of the positive parts as k -> infinity: nu1 restricted to the
  // regions where nu2 vanishes, plus undominated atoms
  {
    Measure lim;
    lim.w.a = nu1.a();
    lim.w.b = nu1.b();
    for (const auto& pc : nu1.w.pieces) {
      // split by nu2's pieces
      std::vector<double> cuts{pc.lo, pc.hi};
      for (const auto& qc : nu2.w.pieces)
        for (double x : {qc.lo, qc.hi})
          if (x > pc.lo && x < pc.hi) cuts.push_back(x);
      std::sort(cuts.begin(), cuts.end());
      for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double u = cuts[i], v = cuts[i + 1];
        if (v - u < 1e-15) continue;
        double m = 0.5 * (u + v);
        bool nu2Positive = false;
        if (m >= nu2.a() && m <= nu2.b())
          nu2Positive = !nu2.w.pieces[nu2.w.pieceIndexAt(m)].zero;
        Piece seg = pc;
        seg.lo = u;
        seg.hi = v;
        if (nu2Positive) {
          seg = Piece{};
          seg.lo = u;
          seg.hi = v;
          seg.zero = true;
        }
        lim.w.pieces.push_back(seg);
      }
    }
    for (const auto& a : nu1.atoms)
      if (atomMass(nu2.atoms, a.x) == 0) lim.atoms.push_back(a);
    LambdaResult Ll = lambdaCoreB(viewOf(lim), nu3.w, p, N, false);
    if (Ll.finite == Tri::No) {
      out.kind = ThreeMeasureOutcome::NotFound;
      out.detail =
          "the k->infinity limit of the positive parts already has an infinite "
          "Lambda against nu3";
      return out;
    }
  }

  out.kind = ThreeMeasureOutcome::Unknown;
  out.detail = "no finite-Lambda witness found; hypotheses for the iff routes fail";
  return out;
}

}  // namespace sobmuck
