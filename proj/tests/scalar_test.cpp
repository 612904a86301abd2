#include <cmath>
#include <random>

#include "doctest.h"
#include "pw1d/scalar.hpp"

using namespace pw1d;

namespace {

Scalar quad(long an, long ad, long bn, long bd, unsigned long k) {
  return Scalar::from_parts(mpq_class(an, ad), mpq_class(bn, bd), k);
}

// Independent float oracle for the circular order: lift to angles through
// arctan, infinity at the top of the circle.
double angle(const ProjPoint& p) {
  if (p.is_infinity()) return std::atan(1.0) * 2;  // pi/2
  return std::atan(p.value().approx());
}

bool circular_oracle(const ProjPoint& x, const ProjPoint& y, const ProjPoint& z) {
  const double pi = std::acos(-1.0);
  double ax = angle(x), ay = angle(y), az = angle(z);
  double d1 = std::fmod(ay - ax + 2 * pi, pi);  // total angle of this circle is pi
  double d2 = std::fmod(az - ax + 2 * pi, pi);
  return d1 < d2;
}

}  // namespace

TEST_CASE("rational arithmetic is exact and canonical") {
  Scalar a(3, 6);
  CHECK(a == Scalar(1, 2));
  CHECK((Scalar(1, 3) + Scalar(1, 6)) == Scalar(1, 2));
  CHECK((Scalar(2, 3) * Scalar(9, 4)) == Scalar(3, 2));
  CHECK(Scalar(-7, 3).inverse() == Scalar(-3, 7));
  CHECK(Scalar(5).floor() == 5);
  CHECK(Scalar(7, 2).floor() == 3);
  CHECK(Scalar(-7, 2).floor() == -4);
  CHECK_THROWS_AS(Scalar(1).operator/=(Scalar(0)), Error);
}

TEST_CASE("quadratic mode: sign decided exactly") {
  // 3 - 2*sqrt(2) is positive (9 > 8), 2 - 2*sqrt(2) is negative (4 < 8)
  CHECK(quad(3, 1, -2, 1, 2).sign() == 1);
  CHECK(quad(2, 1, -2, 1, 2).sign() == -1);
  CHECK(quad(-3, 1, 2, 1, 2).sign() == -1);
  CHECK(quad(-2, 1, 2, 1, 2).sign() == 1);
  CHECK(quad(0, 1, 1, 1, 2).sign() == 1);
  CHECK(quad(0, 1, -5, 7, 2).sign() == -1);
  // (1 + sqrt 2)(1 - sqrt 2) = -1
  CHECK(quad(1, 1, 1, 1, 2) * quad(1, 1, -1, 1, 2) == Scalar(-1));
  // 1/(1 + sqrt 2) = -1 + sqrt 2
  CHECK(quad(1, 1, 1, 1, 2).inverse() == quad(-1, 1, 1, 1, 2));
  CHECK((quad(1, 1, 1, 1, 2) + quad(0, 1, -1, 1, 2)).is_rational());
  CHECK_THROWS_AS(quad(0, 1, 1, 1, 2) + quad(0, 1, 1, 1, 3), Error);
}

TEST_CASE("quadratic floor") {
  CHECK(quad(0, 1, 1, 1, 2).floor() == 1);    // sqrt 2
  CHECK(quad(0, 1, -1, 1, 2).floor() == -2);  // -sqrt 2
  CHECK(quad(3, 1, -2, 1, 2).floor() == 0);   // ~0.17
  CHECK(quad(1, 1, 1, 1, 2).floor() == 2);    // ~2.41
}

TEST_CASE("field axioms on random samples") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-12, 12);
  auto rand_scalar = [&](bool quadratic) {
    Scalar r(d(rng), 1 + std::abs(d(rng)));
    if (!quadratic) return r;
    return r + quad(0, 1, d(rng), 1 + std::abs(d(rng)), 5);
  };
  for (int mode = 0; mode < 2; ++mode) {
    for (int i = 0; i < 200; ++i) {
      Scalar a = rand_scalar(mode), b = rand_scalar(mode), c = rand_scalar(mode);
      CHECK(a + b == b + a);
      CHECK((a + b) + c == a + (b + c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a * b) * c == a * (b * c));
      if (!a.is_zero()) CHECK(a * a.inverse() == Scalar(1));
      CHECK(compare(a, b) == -compare(b, a));
    }
    for (int i = 0; i < 100; ++i) {
      Scalar a = rand_scalar(mode), b = rand_scalar(mode), c = rand_scalar(mode);
      if (a <= b && b <= c) CHECK(a <= c);
    }
  }
}

TEST_CASE("square roots in the session field") {
  CHECK(*Scalar::sqrt(Scalar(9, 4), 0) == Scalar(3, 2));
  CHECK(!Scalar::sqrt(Scalar(2), 0));
  CHECK(*Scalar::sqrt(Scalar(2), 2) == quad(0, 1, 1, 1, 2));
  CHECK(*Scalar::sqrt(Scalar(8), 2) == quad(0, 1, 2, 1, 2));
  CHECK(!Scalar::sqrt(Scalar(5), 2));
  CHECK(!Scalar::sqrt(Scalar(-4), 0));
  // 3 + 2 sqrt 2 = (1 + sqrt 2)^2
  CHECK(*Scalar::sqrt(quad(3, 1, 2, 1, 2), 2) == quad(1, 1, 1, 1, 2));
  CHECK(!Scalar::sqrt(quad(1, 1, 1, 1, 2), 2));
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> d(-6, 6);
  for (int i = 0; i < 100; ++i) {
    Scalar x = quad(d(rng), 1 + std::abs(d(rng)), d(rng), 1 + std::abs(d(rng)), 3);
    auto r = Scalar::sqrt(x * x, 3);
    REQUIRE(r);
    CHECK(*r * *r == x * x);
    CHECK(r->sign() >= 0);
  }
}

TEST_CASE("normalize_point") {
  CHECK(ProjPoint::normalized(Scalar(3), Scalar(6)) == ProjPoint::finite(Scalar(1, 2)));
  CHECK(ProjPoint::normalized(Scalar(5), Scalar(0)) == ProjPoint::infinity());
  CHECK(ProjPoint::normalized(Scalar(-2, 3), Scalar(4)) == ProjPoint::finite(Scalar(-1, 6)));
  CHECK_THROWS_AS(ProjPoint::normalized(Scalar(0), Scalar(0)), Error);
  ProjPoint p = ProjPoint::normalized(Scalar(-2, 3), Scalar(4));
  CHECK(ProjPoint::normalized(p.value(), Scalar(1)) == p);
}

TEST_CASE("circular order basics") {
  ProjPoint inf = ProjPoint::infinity();
  auto pt = [](long n, long d = 1) { return ProjPoint::finite(Scalar(n, d)); };
  CHECK(circular_order(pt(0), pt(1), inf));
  CHECK(!circular_order(pt(1), pt(0), inf));
  CHECK(circular_order(inf, pt(-5), pt(7)));
  CHECK_THROWS_AS(circular_order(pt(1), pt(1), inf), Error);
}

TEST_CASE("circular order: cyclicity, antisymmetry, float oracle") {
  std::vector<ProjPoint> pts = {ProjPoint::infinity()};
  for (auto [n, d] : std::vector<std::pair<long, long>>{
           {-3, 1}, {-1, 2}, {0, 1}, {1, 6}, {1, 2}, {2, 3}, {1, 1}, {3, 2}, {2, 1}, {7, 2}, {5, 1}})
    pts.push_back(ProjPoint::finite(Scalar(n, d)));
  REQUIRE(pts.size() == 12);
  for (const auto& x : pts)
    for (const auto& y : pts)
      for (const auto& z : pts) {
        if (x == y || y == z || x == z) continue;
        bool c = circular_order(x, y, z);
        CHECK(c == circular_order(y, z, x));
        CHECK(c != circular_order(x, z, y));
        CHECK(c == circular_oracle(x, y, z));
      }
}
