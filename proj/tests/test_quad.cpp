#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sobmuck/integrate.hpp"

using namespace sobmuck;

namespace {

Piece powerPiece(double a, double b, double center, double alpha) {
  Piece p;
  p.lo = a;
  p.hi = b;
  p.factors = {Factor::power(center, alpha)};
  return p;
}

}  // namespace

TEST_CASE("closed forms for pure powers") {
  // int_0^1 x^-1/2 = 2
  PieceIntegral r = integratePiece(powerPiece(0, 1, 0, -0.5), 0, 1, 1e-10);
  CHECK(!r.div);
  CHECK(r.bracket.lo <= 2.0);
  CHECK(r.bracket.hi >= 2.0);
  CHECK(r.bracket.width() <= 1e-8 * 3.0);

  // int_0^1 1 = 1
  Piece one;
  one.lo = 0;
  one.hi = 1;
  r = integratePiece(one, 0, 1, 1e-12);
  CHECK(r.bracket.lo == doctest::Approx(1.0));
  CHECK(r.bracket.hi == doctest::Approx(1.0));

  // divergent
  r = integratePiece(powerPiece(0, 1, 0, -1.0), 0, 1, 1e-8);
  CHECK(r.div.has_value());
  CHECK(std::isinf(r.bracket.hi));
}

TEST_CASE("random power factors against analytic antiderivatives") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> ua(-0.95, 3.0);
  for (int trial = 0; trial < 60; ++trial) {
    double alpha = ua(rng);
    double c = 0.125 * (1 + (trial % 5));
    PieceIntegral r = integratePiece(powerPiece(0, 1, 0, alpha), 0, c, 1e-9);
    double exact = std::pow(c, alpha + 1.0) / (alpha + 1.0);
    REQUIRE(!r.div);
    CHECK(r.bracket.lo <= exact * (1 + 1e-12) + 1e-300);
    CHECK(r.bracket.hi >= exact * (1 - 1e-12));
    CHECK(std::abs(r.estimate - exact) <= 1e-8 * (1.0 + exact));
    CHECK(r.bracket.width() <= 2e-8 * (1.0 + r.bracket.hi));
  }
}

TEST_CASE("two-sided singular products") {
  // int_0^1 x^-1/2 (1-x)^-1/2 dx = pi
  Piece p;
  p.lo = 0;
  p.hi = 1;
  p.factors = {Factor::power(0, -0.5), Factor::power(1, -0.5)};
  PieceIntegral r = integratePiece(p, 0, 1, 1e-9);
  double pi = 3.14159265358979323846;
  REQUIRE(!r.div);
  CHECK(r.bracket.lo <= pi);
  CHECK(r.bracket.hi >= pi);
  CHECK(r.bracket.width() <= 1e-6 * pi);
}

TEST_CASE("log factor integrals bracket closed forms") {
  // int_0^c x |log x|^2 dx has closed form; c = 0.25
  // antiderivative: x^2/2 L^2 + x^2/2 L + x^2/4 with L = log(1/x)
  double c = 0.25;
  double L = std::log(1.0 / c);
  double exact = c * c * (0.5 * L * L + 0.5 * L + 0.25);
  Piece p;
  p.lo = 0;
  p.hi = c;
  p.factors = {Factor::power(0, 1.0), Factor::logPower(0, 2.0)};
  PieceIntegral r = integratePiece(p, 0, c, 1e-9);
  REQUIRE(!r.div);
  CHECK(r.bracket.lo <= exact * (1 + 1e-10));
  CHECK(r.bracket.hi >= exact * (1 - 1e-10));
  CHECK(std::abs(r.estimate - exact) <= 1e-7 * exact);
}

TEST_CASE("boundary-integrable log case gives a valid bracket") {
  // int_0^c x^-1 |log x|^-2 dx = 1/log(1/c), c = 0.2
  double c = 0.2;
  double exact = 1.0 / std::log(1.0 / c);
  Piece p;
  p.lo = 0;
  p.hi = c;
  p.factors = {Factor::power(0, -1.0), Factor::logPower(0, -2.0)};
  PieceIntegral r = integratePiece(p, 0, c, 1e-9);
  REQUIRE(!r.div);
  CHECK(r.bracket.lo <= exact);
  CHECK(r.bracket.hi >= exact);
  // slow order: only expect a modest relative width here
  CHECK(r.bracket.width() <= 0.05 * exact);
}

TEST_CASE("exponential decay against a negative power") {
  // int_0^1 exp(-1/x) x^-2 dx = e^-1 exactly
  Piece p;
  p.lo = 0;
  p.hi = 1;
  p.factors = {Factor::expNeg(0, 1.0, 1.0), Factor::power(0, -2.0)};
  PieceIntegral r = integratePiece(p, 0, 1, 1e-10);
  double exact = std::exp(-1.0);
  REQUIRE(!r.div);
  CHECK(r.bracket.lo <= exact);
  CHECK(r.bracket.hi >= exact);
  CHECK(r.bracket.width() <= 1e-7 * exact);
}

TEST_CASE("envelopes widen brackets by the envelope constant only") {
  Piece p;
  p.lo = 0;
  p.hi = 1;
  p.factors = {Factor::envelope(2.0)};
  PieceIntegral r = integratePiece(p, 0, 1, 1e-10);
  CHECK(r.bracket.lo == doctest::Approx(0.5));
  CHECK(r.bracket.hi == doctest::Approx(2.0));
  CHECK(r.estimate == doctest::Approx(1.0));
}

TEST_CASE("integrability decisions match the spec examples") {
  WeightExpr w1 = WeightExpr::single(0, 1, {Factor::power(0, 1.0)});
  CHECK(integrability(w1, 0, false, 1.0) == Tri::No);

  WeightExpr w2 = WeightExpr::single(0, 1, {Factor::power(0, 0.5)});
  CHECK(integrability(w2, 0, false, 1.0) == Tri::Yes);

  WeightExpr w3 =
      WeightExpr::single(0, 0.5, {Factor::power(0, 1.0), Factor::logPower(0, 2.0)});
  CHECK(integrability(w3, 0, false, 1.0) == Tri::Yes);

  WeightExpr z = WeightExpr::zero(0, 1);
  CHECK(integrability(z, 0.5, true, 1.0) == Tri::No);
}

TEST_CASE("integrability agrees with integrator divergence on random weights") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> ua(-0.9, 2.5);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  std::uniform_int_distribution<int> kind(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Factor> fs{Factor::power(0, ua(rng))};
    if (kind(rng) == 1) fs.push_back(Factor::logPower(0, ud(rng)));
    if (kind(rng) == 2) {
      fs.push_back(Factor::logPower(0, ud(rng)));
      fs.push_back(Factor::logLogPower(0, ud(rng)));
    }
    WeightExpr w = WeightExpr::single(0, 0.25, fs);
    double q = 0.5 + 0.5 * (trial % 4);
    Tri verdict = integrability(w, 0, false, q);
    Piece pw = piecePow(w.pieces[0], -q);
    PieceIntegral r = integratePiece(pw, 0, 0.25, 1e-6, nullptr, QuadBudget{20000, 360});
    if (verdict == Tri::Yes) {
      CHECK(!r.div);
      CHECK(std::isfinite(r.bracket.hi));
    } else {
      CHECK(r.div.has_value());
    }
  }
}

TEST_CASE("cumulative antiderivative grids") {
  // w == 1, p = 2: W(r) = r
  WeightExpr w = WeightExpr::constant(0, 1);
  CumGrid g = cum_antiderivative(w, 2.0, 64);
  REQUIRE(g.firstInfinite < 0);
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    CHECK(g.W[i].lo <= g.nodes[i] + 1e-12);
    CHECK(g.W[i].hi >= g.nodes[i] - 1e-12);
  }

  // w = (1-x)^2, p = 2: W(r) = r/(1-r)
  WeightExpr w2 = WeightExpr::single(0, 1, {Factor::power(1, 2.0)});
  CumGrid g2 = cum_antiderivative(w2, 2.0, 256);
  for (size_t i = 0; i + 1 < g2.nodes.size(); ++i) {
    double r = g2.nodes[i];
    if (r >= 1.0 - 1e-9) continue;
    double exact = r / (1.0 - r);
    CHECK(g2.W[i].lo <= exact * (1 + 1e-9) + 1e-12);
    CHECK(g2.W[i].hi >= exact * (1 - 1e-9) - 1e-12);
  }

  // zero piece: divergence certificate
  WeightExpr z = WeightExpr::zero(0, 1);
  CumGrid g3 = cum_antiderivative(z, 2.0, 16);
  CHECK(g3.firstInfinite >= 0);
  CHECK(g3.diverged.has_value());
}

TEST_CASE("grid refinement does not widen brackets at shared nodes") {
  WeightExpr w = WeightExpr::single(0, 1, {Factor::power(0, 1.5)});
  CumGrid coarse = cum_power_grid(w, -0.5, 0, 1, 64);
  CumGrid fine = cum_power_grid(w, -0.5, 0, 1, 128);
  for (size_t i = 0; i < coarse.nodes.size(); ++i) {
    for (size_t j = 0; j < fine.nodes.size(); ++j) {
      if (std::abs(coarse.nodes[i] - fine.nodes[j]) < 1e-15) {
        CHECK(fine.W[j].width() <= coarse.W[i].width() * (1.0 + 1e-9) + 1e-12);
      }
    }
  }
}
