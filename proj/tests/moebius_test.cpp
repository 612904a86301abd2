#include <random>

#include "doctest.h"
#include "pw1d/moebius.hpp"

using namespace pw1d;

namespace {

Homography H4(long a, long b, long c, long d) {
  return Homography(Scalar(a), Scalar(b), Scalar(c), Scalar(d));
}
ProjPoint pt(long n, long d = 1) { return ProjPoint::finite(Scalar(n, d)); }

}  // namespace

TEST_CASE("canonical form: scaling invariance, idempotence") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-5, 5);
  for (int i = 0; i < 300; ++i) {
    Scalar a(d(rng)), b(d(rng)), c(d(rng)), e(d(rng));
    if ((a * e - b * c).is_zero()) continue;
    Homography m(a, b, c, e);
    long l = d(rng);
    if (l == 0) l = 3;
    Scalar lam(l, 1 + std::abs(d(rng)));
    Homography scaled(a * lam, b * lam, c * lam, e * lam);
    CHECK(m == scaled);
    CHECK(Homography(m.a(), m.b(), m.c(), m.d()) == m);
    CHECK(m.orientation() == (a * e - b * c).sign());
  }
  // quadratic-mode canonical form: leading entry one
  Scalar r2 = Scalar::from_parts(0, 1, 2);
  Homography q(r2, Scalar(0), Scalar(0), Scalar(1));
  Homography q2(Scalar(2), Scalar(0), Scalar(0), r2);  // same PGL2 class (scale sqrt2)
  CHECK(q == q2);
  CHECK_THROWS_AS(Homography(Scalar(1), Scalar(2), Scalar(2), Scalar(4)), Error);
}

TEST_CASE("compose and inverse") {
  CHECK(H4(1, 1, 0, 1).compose(H4(1, 0, 1, 1)) == H4(2, 1, 1, 1));
  Homography g = H4(3, -2, 5, 7);
  CHECK(g.compose(Homography()) == g);
  CHECK(Homography().compose(g) == g);
  CHECK(Homography::inversion().compose(Homography::inversion()) == Homography());
  CHECK(Homography().inverse() == Homography());
  CHECK(H4(1, 1, 0, 1).inverse() == H4(1, -1, 0, 1));
  CHECK(H4(2, 1, 1, 1).inverse() == H4(1, -1, -1, 2));
  // adjugate oracle: g * adj(g) is a scalar matrix
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-5, 5);
  for (int i = 0; i < 200; ++i) {
    Scalar a(d(rng)), b(d(rng)), c(d(rng)), e(d(rng));
    if ((a * e - b * c).is_zero()) continue;
    Homography m(a, b, c, e);
    CHECK(m.compose(m.inverse()) == Homography());
    CHECK(m.inverse().compose(m) == Homography());
  }
}

TEST_CASE("apply: action on P^1") {
  CHECK(H4(2, 1, 1, 1).apply(pt(0)) == pt(1));
  CHECK(H4(2, 1, 1, 1).apply(ProjPoint::infinity()) == pt(2));
  CHECK(Homography::inversion().apply(pt(1, 3)) == pt(3));
  CHECK(Homography::inversion().apply(pt(0)) == ProjPoint::infinity());
  // action respects composition and inverse
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> d(-5, 5);
  for (int i = 0; i < 200; ++i) {
    Scalar a(d(rng)), b(d(rng)), c(d(rng)), e(d(rng));
    if ((a * e - b * c).is_zero()) continue;
    Homography g(a, b, c, e);
    Homography h = H4(1, d(rng), 0, 1).compose(Homography::inversion());
    ProjPoint x = (d(rng) >= 0) ? pt(d(rng), 3) : ProjPoint::infinity();
    CHECK(g.compose(h).apply(x) == g.apply(h.apply(x)));
    CHECK(g.inverse().apply(g.apply(x)) == x);
  }
}

TEST_CASE("derivative") {
  CHECK(H4(1, 1, 0, 1).derivative_at(pt(17, 5)) == Scalar(1));
  CHECK(Homography::inversion().derivative_at(pt(2)) == Scalar(-1, 4));
  CHECK(H4(2, 0, 0, 1).derivative_at(pt(5)) == Scalar(2));
  CHECK_THROWS_AS(Homography::inversion().derivative_at(pt(0)), Error);
  CHECK_THROWS_AS(H4(2, 0, 0, 1).derivative_at(ProjPoint::infinity()), Error);
  // chart-aware variant is total and nonzero; in the inverted chart the
  // inversion reads as the identity near 0
  CHECK(Homography::inversion().derivative_chart(pt(0)) == Scalar(1));
  CHECK(H4(2, 0, 0, 1).derivative_chart(ProjPoint::infinity()) == Scalar(1, 2));
}

TEST_CASE("chain rule, exact, on random pairs") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> d(-5, 5);
  int done = 0;
  while (done < 300) {
    Scalar a(d(rng)), b(d(rng)), c(d(rng)), e(d(rng));
    Scalar a2(d(rng)), b2(d(rng)), c2(d(rng)), e2(d(rng));
    if ((a * e - b * c).is_zero() || (a2 * e2 - b2 * c2).is_zero()) continue;
    Homography g(a, b, c, e), h(a2, b2, c2, e2);
    ProjPoint x = pt(d(rng), 7);
    ProjPoint hx = h.apply(x);
    if (hx.is_infinity() || g.apply(hx).is_infinity()) continue;
    CHECK(g.compose(h).derivative_at(x) == g.derivative_at(hx) * h.derivative_at(x));
    ++done;
  }
}

TEST_CASE("fixed points") {
  FixedPoints all = Homography().fixed_points(0);
  CHECK(all.kind == FixedPoints::Kind::all_points);

  FixedPoints parab = H4(1, 1, 0, 1).fixed_points(0);
  REQUIRE(parab.points.size() == 1);
  CHECK(parab.points[0] == ProjPoint::infinity());

  FixedPoints hyp = H4(2, 0, 0, 1).fixed_points(0);
  REQUIRE(hyp.points.size() == 2);
  CHECK(hyp.points[0] == ProjPoint::infinity());
  CHECK(hyp.points[1] == pt(0));

  // x^2 - x - 1: golden ratio, not rational and not in Q(sqrt 2)
  CHECK(H4(2, 1, 1, 1).fixed_points(0).kind == FixedPoints::Kind::not_in_field);
  CHECK(H4(2, 1, 1, 1).fixed_points(2).kind == FixedPoints::Kind::not_in_field);
  FixedPoints golden = H4(2, 1, 1, 1).fixed_points(5);
  REQUIRE(golden.points.size() == 2);
  for (const auto& p : golden.points) CHECK(H4(2, 1, 1, 1).apply(p) == p);

  // x -> (x+2)/(x+1): fixed points +-sqrt(2)
  FixedPoints r2 = H4(1, 2, 1, 1).fixed_points(2);
  REQUIRE(r2.points.size() == 2);
  for (const auto& p : r2.points) CHECK(H4(1, 2, 1, 1).apply(p) == p);
  CHECK(r2.points[0] == ProjPoint::finite(Scalar::from_parts(0, 1, 2)));

  // elliptic rotation x -> -1/x has no real fixed points
  CHECK(H4(0, -1, 1, 0).fixed_points(0).points.empty());
}

TEST_CASE("affinity and slope") {
  CHECK(H4(1, 1, 0, 1).is_affine());
  CHECK(!Homography::inversion().is_affine());
  CHECK(H4(3, -2, 0, 1).is_affine());
  CHECK(H4(3, -2, 0, 1).slope() == Scalar(3));
  CHECK(H4(3, -2, 0, 1).offset() == Scalar(-2));
  CHECK(H4(6, -4, 0, 2) == H4(3, -2, 0, 1));
  CHECK(Homography::affine(Scalar(1, 2), Scalar(1, 3)).slope() == Scalar(1, 2));
}

TEST_CASE("matrices over Z[sqrt 2] compose and act") {
  Scalar r2 = Scalar::from_parts(0, 1, 2);
  Homography g(Scalar(1) + r2, Scalar(1), Scalar(0), Scalar(1) - r2);
  Homography h(Scalar(1), r2, r2, Scalar(1));
  CHECK(g.compose(h).compose(h.inverse()) == g);
  ProjPoint x = ProjPoint::finite(r2);
  CHECK(g.inverse().apply(g.apply(x)) == x);
  CHECK(g.compose(h).apply(x) == g.apply(h.apply(x)));
}
