#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sobmuck/order.hpp"

using namespace sobmuck;

namespace {

OrderTuple mk(double alpha, double l1 = 0, double l2 = 0, double l3 = 0) {
  OrderTuple t;
  t.pw = {alpha, l1, l2, l3};
  return t;
}

OrderTuple mkExp(double rate, double gamma, double alpha = 0) {
  OrderTuple t;
  t.exps.push_back({gamma, rate});
  t.pw[0] = alpha;
  return t;
}

}  // namespace

TEST_CASE("integrability of power orders") {
  CHECK(orderIntegrable(mk(-0.5)) == Tri::Yes);
  CHECK(orderIntegrable(mk(-1.0)) == Tri::No);
  CHECK(orderIntegrable(mk(-2.0)) == Tri::No);
  CHECK(orderIntegrable(mk(0.0)) == Tri::Yes);
  CHECK(orderIntegrable(mk(3.0)) == Tri::Yes);
}

TEST_CASE("integrability at the log boundary") {
  // d^-1 L^-2 integrates (substitution u = log 1/d)
  CHECK(orderIntegrable(mk(-1.0, -2.0)) == Tri::Yes);
  CHECK(orderIntegrable(mk(-1.0, -1.0)) == Tri::No);
  CHECK(orderIntegrable(mk(-1.0, 0.5)) == Tri::No);
  CHECK(orderIntegrable(mk(-1.0, -1.0, -2.0)) == Tri::Yes);
  CHECK(orderIntegrable(mk(-1.0, -1.0, -1.0)) == Tri::No);
  CHECK(orderIntegrable(mk(-1.0, -1.0, -1.0, -1.5)) == Tri::Yes);
  CHECK(orderIntegrable(mk(-1.0, -1.0, -1.0, -1.0)) == Tri::No);
}

TEST_CASE("exponential factors dominate") {
  CHECK(orderIntegrable(mkExp(-2.0, 1.0, -5.0)) == Tri::Yes);
  CHECK(orderIntegrable(mkExp(+0.5, 1.0, 10.0)) == Tri::No);
  // cancelling rates fall back to the power
  OrderTuple t = orderProduct(mkExp(-1.0, 2.0), mkExp(+1.0, 2.0, -3.0));
  CHECK(t.exps.empty());
  CHECK(orderIntegrable(t) == Tri::No);
}

TEST_CASE("comparison is a total order on a grid") {
  std::vector<OrderTuple> grid;
  for (double rate : {-1.0, 0.0}) {
    for (double g : {1.0, 2.0}) {
      for (double a : {-0.5, 0.0, 1.0}) {
        for (double l : {-1.0, 0.0, 1.0}) {
          OrderTuple t;
          if (rate != 0) t.exps.push_back({g, rate});
          t.pw = {a, l, 0, 0};
          t.normalize();
          grid.push_back(t);
        }
      }
    }
  }
  grid.push_back(OrderTuple::zeroWeight());
  for (const auto& x : grid)
    for (const auto& y : grid) {
      CHECK(orderCompare(x, y) == -orderCompare(y, x));  // antisymmetry
      for (const auto& z : grid) {
        // transitivity of strict dominance
        if (orderCompare(x, y) > 0 && orderCompare(y, z) > 0)
          CHECK(orderCompare(x, z) > 0);
      }
    }
}

TEST_CASE("larger gamma dominates regardless of rate magnitude") {
  OrderTuple fast = mkExp(-0.01, 2.0);  // exp(-0.01 d^-2)
  OrderTuple slow = mkExp(-100.0, 1.0);
  // fast decays faster: fast/slow -> 0
  CHECK(orderCompare(fast, slow) == -1);
}

TEST_CASE("antiderivative orders") {
  OrderTuple t = orderAntiderivative(mk(-0.5));
  CHECK(t.pw[0] == doctest::Approx(0.5));
  // boundary: d^-1 L^-2 integrates to L^-1
  t = orderAntiderivative(mk(-1.0, -2.0));
  CHECK(t.pw[0] == 0.0);
  CHECK(t.pw[1] == doctest::Approx(-1.0));
  // divergent growth: d^-2 grows like d^-1
  t = orderAntiderivative(mk(-2.0));
  CHECK(t.pw[0] == doctest::Approx(-1.0));
  // d^-1 grows like L
  t = orderAntiderivative(mk(-1.0));
  CHECK(t.pw[0] == 0.0);
  CHECK(t.pw[1] == doctest::Approx(1.0));
  // full boundary chain overflows into the slow-growth marker
  t = orderAntiderivative(mk(-1.0, -1.0, -1.0, -1.0));
  CHECK(t.slowFactor == 1);
  CHECK(orderLimitSign(t) == +1);
}

TEST_CASE("product limit signs drive Lambda finiteness") {
  // tail (1-r)^1 against W ~ (1-r)^-1: bounded product
  CHECK(productLimitSign(mk(1.0), mk(-1.0)) == 0);
  // atom tail (constant) against a divergent W
  CHECK(productLimitSign(mk(0.0), mk(-1.0)) == +1);
  CHECK(productLimitSign(mk(2.0), mk(-1.0)) == -1);
}
