#include "pw1d/scalar.hpp"

#include <cmath>
#include <sstream>

namespace pw1d {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::zero_vector: return "ZeroVector";
    case Errc::degenerate_triple: return "DegenerateTriple";
    case Errc::mixed_surd_base: return "MixedSurdBase";
    case Errc::singular_matrix: return "SingularMatrix";
    case Errc::pole_at_point: return "PoleAtPoint";
    case Errc::not_circularly_ordered: return "NotCircularlyOrdered";
    case Errc::not_injective: return "NotInjective";
    case Errc::not_surjective: return "NotSurjective";
    case Errc::non_affine_piece_in_circ_model: return "NonAffinePieceInCircModel";
    case Errc::model_mismatch: return "ModelMismatch";
    case Errc::not_supported_on_complement: return "NotSupportedOnComplement";
    case Errc::unknown_generator: return "UnknownGenerator";
    case Errc::radius_zero_with_empty_seeds: return "RadiusZeroWithEmptySeeds";
    case Errc::ball_too_small: return "BallTooSmall";
    case Errc::not_closed: return "NotClosed";
    case Errc::too_large: return "TooLarge";
    case Errc::not_a_group: return "NotAGroup";
    case Errc::mixed_model: return "MixedModel";
    case Errc::not_a_circle: return "NotACircle";
    case Errc::not_hausdorff: return "NotHausdorff";
    case Errc::target_not_representable: return "TargetNotRepresentable";
    case Errc::parse_error: return "ParseError";
    case Errc::bad_input: return "BadInput";
  }
  return "UnknownError";
}

Scalar::Scalar(long num, long den) : rat_(num, den), surd_(0), base_(0) {
  if (den == 0) fail(Errc::bad_input, "zero denominator");
  rat_.canonicalize();
}

Scalar Scalar::from_parts(const mpq_class& rat, const mpq_class& surd, unsigned long base) {
  Scalar s;
  s.rat_ = rat;
  s.rat_.canonicalize();
  s.surd_ = surd;
  s.surd_.canonicalize();
  s.base_ = base;
  if (s.surd_ != 0 && base < 2) fail(Errc::bad_input, "surd part requires a base >= 2");
  s.normalize();
  return s;
}

void Scalar::normalize() {
  if (surd_ == 0) base_ = 0;
}

unsigned long Scalar::merged_base(const Scalar& a, const Scalar& b) {
  if (a.base_ == 0) return b.base_;
  if (b.base_ == 0 || a.base_ == b.base_) return a.base_;
  fail(Errc::mixed_surd_base, "cannot mix sqrt(" + std::to_string(a.base_) + ") with sqrt(" +
                                  std::to_string(b.base_) + ")");
}

bool Scalar::is_integer() const {
  return base_ == 0 && rat_.get_den() == 1;
}

int Scalar::sign() const {
  int sa = sgn(rat_);
  int sb = sgn(surd_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 against b^2 * k exactly.
  mpq_class a2 = rat_ * rat_;
  mpq_class b2k = surd_ * surd_ * mpq_class(static_cast<unsigned long>(base_));
  int c = cmp(a2, b2k);
  if (c == 0) return 0;  // impossible for squarefree base >= 2, kept for safety
  return c > 0 ? sa : sb;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.rat_ = -r.rat_;
  r.surd_ = -r.surd_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  base_ = merged_base(*this, o);
  rat_ += o.rat_;
  surd_ += o.surd_;
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  base_ = merged_base(*this, o);
  rat_ -= o.rat_;
  surd_ -= o.surd_;
  normalize();
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  unsigned long k = merged_base(*this, o);
  mpq_class kq(k);
  mpq_class r = rat_ * o.rat_ + surd_ * o.surd_ * kq;
  mpq_class s = rat_ * o.surd_ + surd_ * o.rat_;
  rat_ = r;
  surd_ = s;
  base_ = k;
  normalize();
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) fail(Errc::bad_input, "division by zero");
  if (base_ == 0) {
    Scalar r;
    r.rat_ = 1 / rat_;
    return r;
  }
  // 1/(a + b sqrt k) = (a - b sqrt k) / (a^2 - b^2 k); the norm is nonzero
  // because sqrt k is irrational.
  mpq_class norm = rat_ * rat_ - surd_ * surd_ * mpq_class(base_);
  Scalar r;
  r.rat_ = rat_ / norm;
  r.surd_ = -surd_ / norm;
  r.base_ = base_;
  r.normalize();
  return r;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

mpz_class Scalar::floor() const {
  if (base_ == 0) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), rat_.get_num_mpz_t(), rat_.get_den_mpz_t());
    return q;
  }
  // Start from a floating hint, then adjust with exact comparisons.
  mpz_class n(std::floor(approx()));
  while (*this - Scalar(n) < Scalar(0)) n -= 1;
  while (*this - Scalar(mpz_class(n + 1)) >= Scalar(0)) n += 1;
  return n;
}

double Scalar::approx() const {
  double v = rat_.get_d();
  if (base_ != 0) v += surd_.get_d() * std::sqrt(static_cast<double>(base_));
  return v;
}

namespace {

// Exact square root of a nonnegative rational, if it is one.
std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (q == 0) return mpq_class(0);
  mpz_class num = q.get_num(), den = q.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  mpq_class r(rn, rd);
  r.canonicalize();
  return r;
}

}  // namespace

std::optional<Scalar> Scalar::sqrt(const Scalar& s, unsigned long k) {
  if (s.sign() < 0) return std::nullopt;
  if (s.base_ != 0 && k != 0 && s.base_ != k)
    fail(Errc::mixed_surd_base, "sqrt in a field with a different base");
  if (s.base_ == 0) {
    if (auto r = rational_sqrt(s.rat_)) return Scalar(*r);
    if (k >= 2) {
      // a rational can also be (b sqrt k)^2 = b^2 k
      if (auto b = rational_sqrt(s.rat_ / mpq_class(k)))
        return from_parts(0, *b, k);
    }
    return std::nullopt;
  }
  // (a + b sqrt k)^2 = s + t sqrt k forces a^2 and k b^2 to be the roots of
  // z^2 - s z + k (t/2)^2, so s^2 - k t^2 must be a rational square.
  const mpq_class& sv = s.rat_;
  const mpq_class& tv = s.surd_;
  mpq_class disc = sv * sv - mpq_class(s.base_) * tv * tv;
  auto r = rational_sqrt(disc);
  if (!r) return std::nullopt;
  for (int pick = 0; pick < 2; ++pick) {
    mpq_class a2 = (pick == 0) ? mpq_class((sv + *r) / 2) : mpq_class((sv - *r) / 2);
    auto a = rational_sqrt(a2);
    if (!a || *a == 0) continue;
    mpq_class b = tv / (2 * (*a));
    Scalar cand = from_parts(*a, b, s.base_);
    if (cand * cand == s) return cand.sign() >= 0 ? cand : -cand;
  }
  return std::nullopt;
}

std::string Scalar::str() const {
  std::ostringstream os;
  if (base_ == 0) {
    os << rat_;
    return os.str();
  }
  os << rat_;
  if (sgn(surd_) >= 0)
    os << "+" << surd_ << "*rt";
  else
    os << "-" << mpq_class(-surd_) << "*rt";
  return os.str();
}

int compare(const Scalar& a, const Scalar& b) { return (a - b).sign(); }

ProjPoint ProjPoint::normalized(const Scalar& p, const Scalar& q) {
  if (p.is_zero() && q.is_zero()) fail(Errc::zero_vector, "[0 : 0] is not a point");
  if (q.is_zero()) return infinity();
  return finite(p / q);
}

const Scalar& ProjPoint::value() const {
  if (inf_) fail(Errc::bad_input, "infinity has no finite value");
  return x_;
}

std::string ProjPoint::str() const { return inf_ ? "inf" : x_.str(); }

int compare(const ProjPoint& a, const ProjPoint& b) {
  if (a.is_infinity() && b.is_infinity()) return 0;
  if (a.is_infinity()) return 1;
  if (b.is_infinity()) return -1;
  return compare(a.value(), b.value());
}

bool circular_order(const ProjPoint& x, const ProjPoint& y, const ProjPoint& z) {
  if (x == y || y == z || x == z)
    fail(Errc::degenerate_triple, "circular order needs pairwise distinct points");
  int xy = compare(x, y), yz = compare(y, z), zx = compare(z, x);
  // (x, y, z) is positively ordered iff it is a cyclic rotation of a strictly
  // increasing triple.
  int rises = (xy < 0) + (yz < 0) + (zx < 0);
  return rises == 2;
}

}  // namespace pw1d
