#include "pw1d/moebius.hpp"

#include <sstream>

namespace pw1d {

Homography::Homography(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d)
    : a_(a), b_(b), c_(c), d_(d) {
  if (det().is_zero()) fail(Errc::singular_matrix, "determinant is zero");
  canonicalize();
}

Homography Homography::affine(const Scalar& slope, const Scalar& offset) {
  return Homography(slope, offset, Scalar(0), Scalar(1));
}

Homography Homography::inversion() { return Homography(Scalar(0), Scalar(1), Scalar(1), Scalar(0)); }

void Homography::canonicalize() {
  Scalar* e[4] = {&a_, &b_, &c_, &d_};
  // Divide by the first nonzero entry.
  Scalar lead;
  for (auto* s : e)
    if (!s->is_zero()) {
      lead = *s;
      break;
    }
  for (auto* s : e) *s /= lead;
  bool rational = true;
  for (auto* s : e)
    if (!s->is_rational()) rational = false;
  if (!rational) return;  // quadratic mode: leading entry 1
  // Rational mode: integral entries, content 1, leading entry positive.
  mpz_class lcm(1);
  for (auto* s : e) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), s->rat().get_den_mpz_t());
  mpz_class gcd(0);
  mpz_class nums[4];
  for (int i = 0; i < 4; ++i) {
    mpq_class scaled = e[i]->rat() * mpq_class(lcm);
    nums[i] = scaled.get_num();  // denominator is 1
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), nums[i].get_mpz_t());
  }
  for (int i = 0; i < 4; ++i) *e[i] = Scalar(mpz_class(nums[i] / gcd));
}

Homography Homography::compose(const Homography& h) const {
  return Homography(a_ * h.a_ + b_ * h.c_, a_ * h.b_ + b_ * h.d_,
                    c_ * h.a_ + d_ * h.c_, c_ * h.b_ + d_ * h.d_);
}

Homography Homography::inverse() const { return Homography(d_, -b_, -c_, a_); }

ProjPoint Homography::apply(const ProjPoint& x) const {
  if (x.is_infinity()) return ProjPoint::normalized(a_, c_);
  const Scalar& v = x.value();
  return ProjPoint::normalized(a_ * v + b_, c_ * v + d_);
}

Scalar Homography::derivative_at(const ProjPoint& x) const {
  if (x.is_infinity()) fail(Errc::pole_at_point, "derivative at infinity needs a chart change");
  Scalar den = c_ * x.value() + d_;
  if (den.is_zero()) fail(Errc::pole_at_point, "image at infinity needs a chart change");
  return det() / (den * den);
}

Scalar Homography::derivative_chart(const ProjPoint& x) const {
  Homography g = *this;
  ProjPoint p = x;
  if (p.is_infinity()) {
    g = g.compose(inversion());
    p = ProjPoint::finite(Scalar(0));
  }
  if (g.apply(p).is_infinity()) g = inversion().compose(g);
  return g.derivative_at(p);
}

FixedPoints Homography::fixed_points(unsigned long session_base) const {
  FixedPoints out;
  if (is_identity()) {
    out.kind = FixedPoints::Kind::all_points;
    return out;
  }
  // Finite fixed points solve c x^2 + (d - a) x - b = 0.
  if (c_.is_zero()) {
    out.points.push_back(ProjPoint::infinity());
    Scalar lin = d_ - a_;
    if (!lin.is_zero()) out.points.push_back(ProjPoint::finite(b_ / lin));
    return out;
  }
  Scalar lin = d_ - a_;
  Scalar disc = lin * lin + Scalar(4) * b_ * c_;
  int s = disc.sign();
  if (s < 0) return out;  // elliptic: empty
  if (s == 0) {
    out.points.push_back(ProjPoint::finite((a_ - d_) / (Scalar(2) * c_)));
    return out;
  }
  auto root = Scalar::sqrt(disc, session_base);
  if (!root) {
    out.kind = FixedPoints::Kind::not_in_field;
    return out;
  }
  Scalar two_c = Scalar(2) * c_;
  out.points.push_back(ProjPoint::finite((a_ - d_ + *root) / two_c));
  out.points.push_back(ProjPoint::finite((a_ - d_ - *root) / two_c));
  return out;
}

bool Homography::is_identity() const {
  return b_.is_zero() && c_.is_zero() && a_ == d_;
}

int Homography::orientation() const { return det().sign(); }

Scalar Homography::slope() const {
  if (!is_affine()) fail(Errc::bad_input, "slope of a non-affine map");
  return a_ / d_;
}

Scalar Homography::offset() const {
  if (!is_affine()) fail(Errc::bad_input, "offset of a non-affine map");
  return b_ / d_;
}

std::string Homography::str() const {
  std::ostringstream os;
  os << "[" << a_.str() << "," << b_.str() << ";" << c_.str() << "," << d_.str() << "]";
  return os.str();
}

int compare(const Homography& g, const Homography& h) {
  if (int c = compare(g.a(), h.a())) return c;
  if (int c = compare(g.b(), h.b())) return c;
  if (int c = compare(g.c(), h.c())) return c;
  return compare(g.d(), h.d());
}

}  // namespace pw1d
