#ifndef PW1D_PIECEWISE_HPP
#define PW1D_PIECEWISE_HPP

#include <optional>
#include <string>
#include <vector>

#include "pw1d/moebius.hpp"

namespace pw1d {

/// Which circle a map lives on. circ: R/Z with fundamental domain [0,1),
/// affine pieces only. proj: the projective line P^1, homographic pieces.
enum class Model { circ, proj };

struct Piece {
  ProjPoint left;   // left endpoint of the half-open arc this piece covers
  Homography map;
};

/// Piecewise homographic (proj) or piecewise affine (circ) self-map of the
/// circle, taken modulo finite sets. Values are kept in canonical form:
///   - pieces cover the circle as half-open arcs [left_i, left_{i+1}),
///     cyclically;
///   - circ: the cut sits at 0, every piece expression maps its arc into
///     [0,1] (the lift), and the first piece starts at 0;
///   - no two adjacent pieces carry the same expression;
///   - construction validates bijectivity modulo finite sets.
/// Equality of canonical forms realizes equality modulo finite sets.
class PiecewiseMap {
 public:
  static PiecewiseMap make(Model model, std::vector<Piece> pieces);
  static PiecewiseMap identity(Model model);
  static PiecewiseMap rotation(const Scalar& amount);  // circ model

  Model model() const { return model_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  size_t piece_count() const { return pieces_.size(); }

  PiecewiseMap compose(const PiecewiseMap& g) const;  // x -> (*this)(g(x))
  PiecewiseMap inverse() const;

  bool equals_mod_finite(const PiecewiseMap& g) const { return *this == g; }

  struct Eval {
    ProjPoint value;
    bool representative_dependent;  // set at genuine discontinuity points
  };
  Eval apply_at(const ProjPoint& x) const;

  /// Canonical-form endpoints; empty for one-piece maps.
  std::vector<ProjPoint> breakpoints() const;

  bool is_global() const;
  bool is_continuous() const;
  bool is_C1() const;
  bool is_piecewise_affine() const;
  bool is_IET() const;

  struct Order {
    bool known;
    unsigned long value;  // valid when known
    unsigned long bound;
  };
  Order order_of(unsigned long bound) const;

  /// circ -> proj: extend by the identity outside [0,1].
  /// proj -> circ: invert that embedding; defined only for maps fixing the
  /// complement of [0,1] pointwise modulo finite sets.
  PiecewiseMap convert_model() const;

  /// Partial evaluation with domain the complement of breakpoints(); the
  /// inverse variant is its exact partial inverse.
  std::optional<ProjPoint> partial_eval(const ProjPoint& x) const;
  std::optional<ProjPoint> partial_eval_inverse(const ProjPoint& y) const;

  /// Index of the piece whose half-open arc contains x.
  size_t piece_index_at(const ProjPoint& x) const;

  std::string str() const;

  friend bool operator==(const PiecewiseMap& f, const PiecewiseMap& g);
  friend bool operator!=(const PiecewiseMap& f, const PiecewiseMap& g) { return !(f == g); }

 private:
  PiecewiseMap(Model model, std::vector<Piece> pieces)
      : model_(model), pieces_(std::move(pieces)) {}

  static PiecewiseMap build(Model model, std::vector<Piece> pieces, bool allow_unsorted);

  bool continuous_at(size_t i) const;  // across the boundary left of piece i
  bool germ_equal_at(size_t i) const;

  Model model_;
  std::vector<Piece> pieces_;
};

/// Total order (model, piece count, then per-piece data); used for canonical
/// element sets in group enumeration.
int compare(const PiecewiseMap& f, const PiecewiseMap& g);
inline bool operator<(const PiecewiseMap& f, const PiecewiseMap& g) { return compare(f, g) < 0; }

}  // namespace pw1d

#endif
