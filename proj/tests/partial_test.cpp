#include <random>
#include <set>

#include "doctest.h"
#include "pw1d/partial.hpp"

using namespace pw1d;

namespace {

// The integer-translation window: X = {0..4}, a(i) = i+1 defined on {0..3}.
PartialAction zwindow() {
  std::vector<std::vector<std::optional<int>>> t(1, std::vector<std::optional<int>>(5));
  for (int i = 0; i < 4; ++i) t[0][i] = i + 1;
  return PartialAction::finite({"a"}, {"0", "1", "2", "3", "4"}, t);
}

// Total 5-cycle on Z/5.
PartialAction zmod5() {
  std::vector<std::vector<std::optional<int>>> t(1, std::vector<std::optional<int>>(5));
  for (int i = 0; i < 5; ++i) t[0][i] = (i + 1) % 5;
  return PartialAction::finite({"a"}, {"0", "1", "2", "3", "4"}, t);
}

// Two disjoint translation windows.
PartialAction two_windows() {
  std::vector<std::string> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(std::to_string(i));
  std::vector<std::vector<std::optional<int>>> t(1, std::vector<std::optional<int>>(10));
  for (int i = 0; i < 4; ++i) t[0][i] = i + 1;
  for (int i = 5; i < 9; ++i) t[0][i] = i + 1;
  return PartialAction::finite({"a"}, pts, t);
}

// Two 3-cycles (0 1 2)(3 4 5), total.
PartialAction two_cycles() {
  std::vector<std::vector<std::optional<int>>> t(1, std::vector<std::optional<int>>(6));
  t[0][0] = 1; t[0][1] = 2; t[0][2] = 0;
  t[0][3] = 4; t[0][4] = 5; t[0][5] = 3;
  return PartialAction::finite({"a"}, {"0", "1", "2", "3", "4", "5"}, t);
}

}  // namespace

TEST_CASE("word reduction and partial application") {
  PartialAction A = zwindow();
  Word aa = {1, 1};
  CHECK(*A.apply_word(aa, 2) == 4);
  CHECK(!A.apply_word(aa, 3));
  CHECK(*A.apply_word({}, 3) == 3);
  // a a^-1 reduces to the empty word: defined everywhere by extension
  Word red = reduce_word({-1, 1});  // applied left to right: a^-1 first... reduced empty
  CHECK(red.empty());
  CHECK(*A.apply_word(red, 0) == 0);
  CHECK(reduce_word({1, -1}).empty());
  CHECK(inverse_word({1, 1, -2}) == Word{2, -1, -1});
  CHECK_THROWS_AS(A.apply_letter(3, 0), Error);
}

TEST_CASE("globalization ball: the translation window") {
  PartialAction A = zwindow();
  auto seeds = A.default_seeds();
  REQUIRE(seeds.size() == 5);
  GlobalizationBall b1 = globalize_ball(A, seeds, 1);
  CHECK(b1.classes().size() == 7);
  CHECK(b1.boundary().size() == 2);
  GlobalizationBall b2 = globalize_ball(A, seeds, 2);
  CHECK(b2.classes().size() == 9);
  for (int r = 1; r <= 10; ++r) {
    GlobalizationBall b = globalize_ball(A, seeds, r);
    CHECK(b.classes().size() == 5 + 2 * static_cast<size_t>(r));
    // monotone: the radius-r ball is a prefix of the radius-(r+1) ball
    GlobalizationBall bn = globalize_ball(A, seeds, r + 1);
    for (size_t c = 0; c < b.classes().size(); ++c) {
      CHECK(b.classes()[c].word == bn.classes()[c].word);
      CHECK(b.classes()[c].point == bn.classes()[c].point);
    }
    // edge inverse-consistency
    for (size_t c = 0; c < b.classes().size(); ++c)
      for (int li = 0; li < b.letter_count(); ++li) {
        int t = b.edge(static_cast<int>(c), li);
        if (t < 0) continue;
        int back = GlobalizationBall::letter_index(
            -GlobalizationBall::index_letter(li));
        CHECK(b.edge(t, back) == static_cast<int>(c));
      }
  }
  CHECK_THROWS_AS(globalize_ball(A, {}, 3), Error);
}

TEST_CASE("globalization of a total action is the action itself") {
  PartialAction A = zmod5();
  for (int r : {0, 1, 3}) {
    GlobalizationBall b = globalize_ball(A, A.default_seeds(), r);
    CHECK(b.classes().size() == 5);
    CHECK(b.closed());
    CHECK(b.boundary().size() == (r == 0 ? 5 : 0));
  }
}

TEST_CASE("seed injectivity and determinism") {
  PartialAction A = zwindow();
  GlobalizationBall b = globalize_ball(A, A.default_seeds(), 3);
  for (size_t i = 0; i < b.seed_classes().size(); ++i) {
    CHECK(b.classes()[b.seed_classes()[i]].word.empty());
    CHECK(b.classes()[b.seed_classes()[i]].point == static_cast<int>(i));
  }
  GlobalizationBall b2 = globalize_ball(A, A.default_seeds(), 3);
  REQUIRE(b.classes().size() == b2.classes().size());
  for (size_t c = 0; c < b.classes().size(); ++c) {
    CHECK(b.classes()[c].word == b2.classes()[c].word);
    CHECK(b.classes()[c].point == b2.classes()[c].point);
  }
}

TEST_CASE("commensurated subsets") {
  PartialAction A = zwindow();
  GlobalizationBall b = globalize_ball(A, A.default_seeds(), 4);
  std::vector<int> X = b.seed_classes();
  CommensuratedResult r = commensurated_check(b, X, false);
  REQUIRE(r.per_generator.size() == 1);
  CHECK(r.per_generator[0].difference.size() == 2);
  // the difference is {class of (e,0), class of (a,4)}
  CHECK(b.classes()[r.per_generator[0].difference[0]].word.empty());
  CHECK(b.classes()[r.per_generator[0].difference[0]].point == 0);
  CHECK(b.classes()[r.per_generator[0].difference[1]].word == Word{1});
  CHECK(b.classes()[r.per_generator[0].difference[1]].point == 4);
  CHECK(!r.per_generator[0].stale);
  // complement representation gives the same difference
  CommensuratedResult rc = commensurated_check(b, X, true);
  CHECK(rc.per_generator[0].difference == r.per_generator[0].difference);

  // invariant subset of a total action: empty difference
  PartialAction T = zmod5();
  GlobalizationBall bt = globalize_ball(T, T.default_seeds(), 2);
  CommensuratedResult rt = commensurated_check(bt, bt.seed_classes(), false);
  CHECK(rt.per_generator[0].difference.empty());

  // a single non-fixed point: difference {y, y+1}
  CommensuratedResult ry = commensurated_check(bt, {2}, false);
  CHECK(ry.per_generator[0].difference == std::vector<int>{2, 3});

  // a ball too small to certify
  GlobalizationBall b0 = globalize_ball(A, A.default_seeds(), 0);
  CHECK_THROWS_WITH_AS(commensurated_check(b0, b0.seed_classes(), false),
                       doctest::Contains("BallTooSmall"), Error);
}

TEST_CASE("symmetric difference sizes agree for s and s^-1") {
  PartialAction A = zwindow();
  GlobalizationBall b = globalize_ball(A, A.default_seeds(), 4);
  std::vector<int> X = b.seed_classes();
  // |X delta aX| computed through the generator, |X delta a^-1 X| by hand
  CommensuratedResult r = commensurated_check(b, X, false);
  std::set<int> xs(X.begin(), X.end()), sx;
  for (int c : X) sx.insert(b.edge(c, GlobalizationBall::letter_index(-1)));
  size_t diff = 0;
  for (int c : xs) diff += !sx.count(c);
  for (int c : sx) diff += !xs.count(c);
  CHECK(diff == r.per_generator[0].difference.size());
}

TEST_CASE("Neumann trimming") {
  PartialAction A = two_cycles();
  GlobalizationBall b = globalize_ball(A, A.default_seeds(), 3);
  REQUIRE(b.closed());
  // X = {0..4}: the defect {5} meets the finite orbit {3,4,5}
  std::vector<int> X = {0, 1, 2, 3, 4};
  NeumannReport rep = neumann_trim(b, X, 3);
  CHECK(rep.removed == std::vector<int>{3, 4, 5});
  CHECK(rep.kept == std::vector<int>{0, 1, 2});
  CHECK(rep.unwitnessed.empty());
  // every subset of Y with |F| <= 3 admits a translation into X
  size_t expected = 3 + 3 + 1;  // singletons, pairs, the triple
  CHECK(rep.checks.size() == expected);
  for (const auto& c : rep.checks) {
    auto img = c.subset;
    for (int& x : img) {
      auto y = A.apply_word(c.witness, x);
      REQUIRE(y);
      x = *y;
    }
    for (int x : img) CHECK(x <= 4);
  }

  // empty defect: nothing removed
  std::vector<int> all = {0, 1, 2, 3, 4, 5};
  NeumannReport rep2 = neumann_trim(b, all, 2);
  CHECK(rep2.removed.empty());
  CHECK(rep2.kept.size() == 6);

  // truncated orbits cannot be certified
  PartialAction W = zwindow();
  GlobalizationBall bw = globalize_ball(W, W.default_seeds(), 3);
  CHECK_THROWS_WITH_AS(neumann_trim(bw, {0, 1, 2, 3}, 2), doctest::Contains("NotClosed"),
                       Error);
}

TEST_CASE("ends estimate") {
  PartialAction A = zwindow();
  GlobalizationBall b = globalize_ball(A, A.default_seeds(), 6);
  EndsReport r = ends_estimate(b, 2);
  CHECK(r.value == 2);
  CHECK(r.stable_from == 3);
  for (auto& [rho, v] : r.per_radius) CHECK(v == 2);

  PartialAction T = two_cycles();
  GlobalizationBall bt = globalize_ball(T, T.default_seeds(), 6);
  CHECK(ends_estimate(bt, 2).value == 0);

  PartialAction D = two_windows();
  GlobalizationBall bd = globalize_ball(D, D.default_seeds(), 6);
  CHECK(ends_estimate(bd, 2).value == 4);

  CHECK_THROWS_AS(ends_estimate(b, 6), Error);
}

TEST_CASE("piecewise-induced partial actions") {
  PiecewiseMap r3 = PiecewiseMap::rotation(Scalar(1, 3));
  PartialAction A = PartialAction::piecewise({"a"}, {r3});
  auto seeds = A.default_seeds();  // the breakpoints 0 and 2/3
  REQUIRE(seeds.size() == 2);
  // the breakpoints are outside every domain: four fresh branches per radius
  GlobalizationBall b = globalize_ball(A, seeds, 3);
  CHECK(b.classes().size() == 2 + 4 * 3);
  // a seed away from the breakpoints has a closed 3-cycle orbit
  PointId x = A.intern_point(ProjPoint::finite(Scalar(1, 6)));
  GlobalizationBall bc = globalize_ball(A, {x}, 4);
  CHECK(bc.classes().size() == 3);
  CHECK(bc.closed());
}

TEST_CASE("verify_axioms") {
  PartialAction A = zwindow();
  AxiomReport r = verify_axioms(A, 3, 64, {});
  CHECK(r.pass);
  CHECK(r.violations.empty());

  PiecewiseMap r3 = PiecewiseMap::rotation(Scalar(1, 3));
  PiecewiseMap r2 = PiecewiseMap::rotation(Scalar(1, 2));
  PartialAction P = PartialAction::piecewise({"a", "b"}, {r3, r2});
  AxiomReport rp = verify_axioms(P, 3, 40, {});
  CHECK(rp.pass);

  // a false relation: a^2 = e fails on the window
  AxiomReport bad = verify_axioms(A, 2, 64, {{1, 1}});
  CHECK(!bad.pass);
  REQUIRE(!bad.violations.empty());
  CHECK(bad.violations[0].kind == "relation");

  // a true relation: the half-rotation squares to the identity
  PartialAction H = PartialAction::piecewise({"a"}, {r2});
  AxiomReport good = verify_axioms(H, 2, 40, {{1, 1}});
  CHECK(good.pass);
}

TEST_CASE("spec files build actions") {
  std::string text = R"({
    "generators": ["a"],
    "carrier": {"finite": ["0", "1", "2", "3", "4"]},
    "tables": {"a": {"0": "1", "1": "2", "2": "3", "3": "4"}},
    "seeds": ["0", "1", "2", "3", "4"]
  })";
  PartialSpecFile f = load_partial_spec_text(text);
  PartialAction A = PartialAction::from_spec(f);
  CHECK(A.finite_carrier());
  CHECK(A.generator_count() == 1);
  CHECK(*A.apply_word({1}, 0) == 1);
  CHECK(!A.apply_word({1}, 4));

  std::string ptext = R"({
    "generators": ["a"],
    "carrier": {"piecewise": ["circ{ [0: 1,1/3] [2/3: 1,-2/3] }"]}
  })";
  PartialAction P = PartialAction::from_spec(load_partial_spec_text(ptext));
  CHECK(!P.finite_carrier());
  CHECK(P.default_seeds().size() == 2);
}
