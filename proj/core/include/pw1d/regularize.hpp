#ifndef PW1D_REGULARIZE_HPP
#define PW1D_REGULARIZE_HPP

#include <optional>
#include <string>
#include <vector>

#include "pw1d/piecewise.hpp"

namespace pw1d {

/// Open arc of the cut circle. circ model: lift coordinates with
/// 0 <= lo < hi <= 1 (hi == 1 is the circle point 0). proj model: circular
/// arc between two points of P^1.
struct ManifoldArc {
  ProjPoint lo, hi;
};

/// Identification of two arc ends. End ids are 2*arc + (right ? 1 : 0).
/// The transition is the chart-continuation germ from end_a's chart into
/// end_b's chart; it maps end_a's boundary value to end_b's boundary value.
struct ManifoldGluing {
  int end_a, end_b;
  Homography transition;
};

struct ManifoldComponent {
  std::vector<int> arcs;        // traversal order
  std::vector<int> gluings;     // gluing crossed after arcs[i]; for chains one fewer
  std::vector<bool> cross_via_a;  // crossed from the end_a side
  bool cycle = false;
  bool hausdorff = true;
  bool solved = true;  // transitions equivariantly determined
};

/// Finitely-charted 1-manifold glued from circle arcs, with affine or
/// homographic transitions. Also records the non-separated germ data that
/// was trimmed while gluing (the globalization is usually not Hausdorff).
class ChartedManifold {
 public:
  static ChartedManifold from_parts(Model model, std::vector<ManifoldArc> arcs,
                                    std::vector<ManifoldGluing> gluings);

  Model model() const { return model_; }
  const std::vector<ManifoldArc>& arcs() const { return arcs_; }
  const std::vector<ManifoldGluing>& gluings() const { return gluings_; }
  const std::vector<ManifoldComponent>& components() const { return components_; }
  const std::vector<std::string>& trimmed() const { return trimmed_; }

  /// End value in chart coordinates (circ: lift scalar, may be 1).
  ProjPoint end_value(int end) const;

  std::string str() const;

 private:
  friend ChartedManifold cut_and_glue(const std::vector<PiecewiseMap>& group);
  void compute_components();

  Model model_ = Model::circ;
  std::vector<ManifoldArc> arcs_;
  std::vector<ManifoldGluing> gluings_;
  std::vector<ManifoldComponent> components_;
  std::vector<std::string> trimmed_;
};

struct Classification {
  enum class Kind {
    open_interval,
    standard_circle,
    nonstandard_circle,
    projective_cover,
    unclassified
  };
  Kind kind = Kind::unclassified;
  Scalar param;      // standard: developed length; nonstandard: multiplier t > 1
  int degree = 0;    // projective cover degree
  std::string reason;
  std::string str() const;
};

/// Closure of the generators under composition and inverse, up to `bound`
/// elements. Throws TooLarge when the bound is exceeded.
std::vector<PiecewiseMap> enumerate_group(const std::vector<PiecewiseMap>& generators,
                                          size_t bound);

/// Cuts the circle at the group's breakpoints (saturated under the action),
/// identifies (element, arc) pairs through the induced partial action, and
/// re-glues arc ends equivariantly. Conflicting germ identifications -- the
/// non-Hausdorff locus of the globalization -- are trimmed orbitwise and
/// reported. Transitions are solved so that every group element acts by
/// chart automorphisms of the result.
ChartedManifold cut_and_glue(const std::vector<PiecewiseMap>& group);

/// Ordered product of the transitions around a circle component, based at
/// its first arc. Throws NotACircle for interval components.
Homography holonomy(const ChartedManifold& manifold, int component);

Classification classify_component(const ChartedManifold& manifold, int component, Model mode);

struct ConjugatorResult {
  std::optional<PiecewiseMap> map;
  std::vector<Classification> classifications;  // per component
  std::string report;
};

/// Piecewise transformation realizing the chart identification with R/Z
/// (StandardCircle) or P^1 (ProjectiveCover(1)); available when the manifold
/// has exactly one component of such type. Other targets yield a structured
/// report and no map.
ConjugatorResult conjugator(const std::vector<PiecewiseMap>& group,
                            const ChartedManifold& manifold);

/// True iff conjugating every group element by `conj` yields a global map.
bool verify_regularized(const std::vector<PiecewiseMap>& group, const PiecewiseMap& conj);

}  // namespace pw1d

#endif
