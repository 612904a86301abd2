#ifndef PW1D_MOEBIUS_HPP
#define PW1D_MOEBIUS_HPP

#include <string>
#include <vector>

#include "pw1d/scalar.hpp"

namespace pw1d {

struct FixedPoints {
  enum class Kind { all_points, not_in_field, points };
  Kind kind = Kind::points;
  std::vector<ProjPoint> points;  // 0, 1 or 2 entries when kind == points
};

/// Element of PGL2 over the scalar field, acting on P^1 by
/// x -> (ax + b)/(cx + d). Stored in canonical form: entries are divided by
/// the first nonzero one; if the result is rational it is rescaled to
/// coprime integers with positive leading entry. Equality in PGL2 is
/// equality of canonical forms.
class Homography {
 public:
  Homography() : a_(1), b_(0), c_(0), d_(1) {}
  Homography(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d);

  static Homography affine(const Scalar& slope, const Scalar& offset);
  static Homography inversion();  // x -> 1/x

  const Scalar& a() const { return a_; }
  const Scalar& b() const { return b_; }
  const Scalar& c() const { return c_; }
  const Scalar& d() const { return d_; }

  Homography compose(const Homography& h) const;  // this after h
  Homography inverse() const;

  ProjPoint apply(const ProjPoint& x) const;
  ProjPoint operator()(const ProjPoint& x) const { return apply(x); }

  /// Derivative of the affine-chart expression at a finite x with finite
  /// image; throws PoleAtPoint otherwise.
  Scalar derivative_at(const ProjPoint& x) const;

  /// Chart-aware derivative: conjugates by x -> 1/x on either side as needed,
  /// so it is defined at and through infinity. Nonzero.
  Scalar derivative_chart(const ProjPoint& x) const;

  /// Exact fixed points in the session field Q(sqrt k); k = 0 means Q.
  FixedPoints fixed_points(unsigned long session_base) const;

  bool is_affine() const { return c_.is_zero(); }
  bool is_identity() const;
  int orientation() const;  // sign of det, +1 or -1

  Scalar det() const { return a_ * d_ - b_ * c_; }

  /// Slope / offset of x -> px + q; requires is_affine().
  Scalar slope() const;
  Scalar offset() const;

  std::string str() const;

  friend bool operator==(const Homography& g, const Homography& h) {
    return g.a_ == h.a_ && g.b_ == h.b_ && g.c_ == h.c_ && g.d_ == h.d_;
  }
  friend bool operator!=(const Homography& g, const Homography& h) { return !(g == h); }

 private:
  void canonicalize();
  Scalar a_, b_, c_, d_;
};

/// Lexicographic order on canonical entries; total on PGL2 classes.
int compare(const Homography& g, const Homography& h);

}  // namespace pw1d

#endif
