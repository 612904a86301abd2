#ifndef PW1D_PARTIAL_HPP
#define PW1D_PARTIAL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pw1d/io.hpp"
#include "pw1d/piecewise.hpp"

namespace pw1d {

/// Reduced words over a free basis; letter +(i+1) is generator i, -(i+1) its
/// inverse. Words apply left to right: word[0] acts first.
using Word = std::vector<int>;
Word reduce_word(Word w);
Word inverse_word(const Word& w);

using PointId = int;

/// Cofinite partial action of a finitely generated free group on either an
/// explicit finite set or on the circle, where each generator's domain is the
/// complement of its canonical breakpoint set.
class PartialAction {
 public:
  static PartialAction finite(std::vector<std::string> generators,
                              std::vector<std::string> points,
                              std::vector<std::vector<std::optional<int>>> tables);
  static PartialAction piecewise(std::vector<std::string> generators,
                                 std::vector<PiecewiseMap> maps);
  static PartialAction from_spec(const PartialSpecFile& spec);

  int generator_count() const { return static_cast<int>(gens_.size()); }
  const std::vector<std::string>& generators() const { return gens_; }
  bool finite_carrier() const { return finite_; }
  const std::vector<PiecewiseMap>& maps() const { return maps_; }

  std::optional<PointId> apply_letter(int letter, PointId x) const;
  std::optional<PointId> apply_word(const Word& reduced, PointId x) const;

  std::string point_name(PointId x) const;
  /// finite: every point; piecewise: every generator breakpoint.
  std::vector<PointId> default_seeds() const;
  PointId intern_point(const ProjPoint& p) const;
  PointId point_by_name(const std::string& name, const ParseSession& session) const;

 private:
  PartialAction() = default;

  std::vector<std::string> gens_;
  bool finite_ = true;
  std::vector<std::string> points_;
  std::vector<std::vector<std::optional<int>>> fwd_, bwd_;
  std::vector<PiecewiseMap> maps_;
  mutable std::vector<ProjPoint> ppoints_;
  mutable std::map<std::string, PointId> pindex_;
};

struct BallClass {
  Word word;      // absorbed representative: the first letter is undefined at point
  PointId point;
  int depth;      // discovery distance from the seed copy
};

/// Radius-r ball of the universal globalization, computed by breadth-first
/// discovery over absorbed (word, point) pairs. Deterministic for fixed
/// input: seeds in order, letters in order a, a^-1, b, b^-1, ...
class GlobalizationBall {
 public:
  const std::vector<BallClass>& classes() const { return classes_; }
  const std::vector<int>& seed_classes() const { return seeds_; }
  int radius() const { return radius_; }
  int letter_count() const { return 2 * action_->generator_count(); }
  const PartialAction& action() const { return *action_; }

  /// Target class of (class, letter), or -1 when it falls outside the ball.
  int edge(int cls, int letter_index) const { return edges_[cls][letter_index]; }
  static int letter_index(int letter) {
    int i = (letter > 0 ? letter : -letter) - 1;
    return 2 * i + (letter > 0 ? 0 : 1);
  }
  static int index_letter(int li) { return (li % 2 == 0) ? li / 2 + 1 : -(li / 2 + 1); }

  bool closed() const;               // every edge resolves inside the ball
  std::vector<int> boundary() const; // classes at depth == radius

  friend GlobalizationBall globalize_ball(const PartialAction& action,
                                          std::vector<PointId> seeds, int radius);

 private:
  const PartialAction* action_ = nullptr;
  int radius_ = 0;
  std::vector<BallClass> classes_;
  std::vector<std::vector<int>> edges_;
  std::vector<int> seeds_;
};

GlobalizationBall globalize_ball(const PartialAction& action, std::vector<PointId> seeds,
                                 int radius);

struct CommensuratedResult {
  struct PerGenerator {
    std::string generator;
    std::vector<int> difference;  // class ids of X symmetric-difference sX
    bool stale;                   // the difference touches the boundary
  };
  std::vector<PerGenerator> per_generator;
  bool all_finite_certified = true;
};

/// X symmetric-difference sX per generator, inside the ball. The subset may
/// be given as listed classes or as the complement of the listed classes;
/// both produce the same difference set. Throws BallTooSmall when an edge
/// needed for the computation leaves the ball.
CommensuratedResult commensurated_check(const GlobalizationBall& ball,
                                        const std::vector<int>& subset, bool complement);

struct NeumannReport {
  std::vector<int> removed;  // classes of removed finite orbits
  std::vector<int> kept;     // the invariant subset Y
  struct Check {
    std::vector<int> subset;
    Word witness;
  };
  std::vector<Check> checks;  // per F with |F| <= bound: g with gF inside X
  std::vector<std::vector<int>> unwitnessed;  // subsets with no witness found
};

/// Removes the orbits meeting (everything \ X) and verifies, exhaustively
/// over subsets F of Y with |F| <= subset_bound, that some group element
/// translates F into X. Requires the touched orbits to be certifiably
/// finite (their components closed inside the ball).
NeumannReport neumann_trim(const GlobalizationBall& ball, const std::vector<int>& X,
                           int subset_bound);

struct EndsReport {
  int collar;
  std::vector<std::pair<int, int>> per_radius;  // (rho, boundary-touching components)
  int value;
  int stable_from;
};

/// Heuristic lower bound for the number of ends: connected components of the
/// collar (ball minus the inner ball of radius rho-k) touching the boundary,
/// reported for each rho in (k, radius].
EndsReport ends_estimate(const GlobalizationBall& ball, int collar);

struct AxiomReport {
  bool pass = true;
  struct Violation {
    std::string kind;
    std::string detail;
  };
  std::vector<Violation> violations;
  int words_checked = 0;
  int sample_count = 0;
};

/// Checks the partial-action axioms on reduced words up to the length bound
/// and validates asserted relations on sample points. The free-group
/// construction passes by design; relations are user assertions.
AxiomReport verify_axioms(const PartialAction& action, int word_len_bound, int sample_bound,
                          const std::vector<Word>& relations);

}  // namespace pw1d

#endif
