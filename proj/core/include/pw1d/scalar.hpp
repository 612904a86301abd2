#ifndef PW1D_SCALAR_HPP
#define PW1D_SCALAR_HPP

#include <gmpxx.h>

#include <optional>
#include <string>

#include "pw1d/error.hpp"

namespace pw1d {

/// Exact element of Q or of a fixed real quadratic extension Q(sqrt k),
/// stored as rat + surd*sqrt(base). base == 0 means the surd part is absent
/// (pure rational); base is a squarefree integer >= 2 otherwise, and surd != 0
/// whenever base != 0. Values carrying distinct nonzero bases never mix.
///
/// All arithmetic and comparisons are exact. The sign of a + b*sqrt(k) is
/// decided without floating point: when a and b agree in sign (or one is
/// zero) that sign wins, otherwise a^2 is compared against b^2*k.
class Scalar {
 public:
  Scalar() : rat_(0), surd_(0), base_(0) {}
  Scalar(long n) : rat_(n), surd_(0), base_(0) {}
  Scalar(const mpz_class& n) : rat_(n), surd_(0), base_(0) {}
  Scalar(const mpq_class& q) : rat_(q), surd_(0), base_(0) { rat_.canonicalize(); }
  Scalar(long num, long den);

  static Scalar from_parts(const mpq_class& rat, const mpq_class& surd, unsigned long base);

  const mpq_class& rat() const { return rat_; }
  const mpq_class& surd() const { return surd_; }
  unsigned long base() const { return base_; }

  bool is_rational() const { return base_ == 0; }
  bool is_zero() const { return rat_ == 0 && surd_ == 0; }
  bool is_integer() const;

  int sign() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  Scalar inverse() const;

  /// Largest integer n with n <= *this.
  mpz_class floor() const;

  /// Square root inside Q(sqrt k) (k = session base; 0 = rational only).
  /// Returns the nonnegative root when the value is a perfect square in the
  /// field, nullopt otherwise. Negative inputs always yield nullopt.
  static std::optional<Scalar> sqrt(const Scalar& s, unsigned long k);

  double approx() const;
  std::string str() const;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.base_ == b.base_ && a.rat_ == b.rat_ && a.surd_ == b.surd_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return (a - b).sign() > 0; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return (a - b).sign() <= 0; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return (a - b).sign() >= 0; }

 private:
  void normalize();
  static unsigned long merged_base(const Scalar& a, const Scalar& b);

  mpq_class rat_;
  mpq_class surd_;
  unsigned long base_;
};

/// Total order compatible with the real embedding. Returns -1, 0, +1.
int compare(const Scalar& a, const Scalar& b);

/// Point of the projective line P^1 = R + {inf}, kept in canonical form:
/// either a finite scalar value ([x : 1]) or infinity ([1 : 0]).
class ProjPoint {
 public:
  ProjPoint() : inf_(false), x_() {}
  static ProjPoint infinity() {
    ProjPoint p;
    p.inf_ = true;
    return p;
  }
  static ProjPoint finite(const Scalar& x) {
    ProjPoint p;
    p.x_ = x;
    return p;
  }
  /// normalize_point: canonical representative of [p : q]; rejects (0, 0).
  static ProjPoint normalized(const Scalar& p, const Scalar& q);

  bool is_infinity() const { return inf_; }
  const Scalar& value() const;

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.x_ == b.x_;
  }
  friend bool operator!=(const ProjPoint& a, const ProjPoint& b) { return !(a == b); }

  std::string str() const;

 private:
  bool inf_;
  Scalar x_;
};

/// Linear order with infinity greatest; induces the circular order on P^1.
int compare(const ProjPoint& a, const ProjPoint& b);
inline bool operator<(const ProjPoint& a, const ProjPoint& b) { return compare(a, b) < 0; }

/// True iff the pairwise distinct triple (x, y, z) is positively ordered on
/// the circle P^1 = R + {inf}, infinity sitting above all reals.
bool circular_order(const ProjPoint& x, const ProjPoint& y, const ProjPoint& z);

}  // namespace pw1d

#endif
