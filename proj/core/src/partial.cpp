#include "pw1d/partial.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace pw1d {

Word reduce_word(Word w) {
  Word out;
  for (int letter : w) {
    if (!out.empty() && out.back() == -letter)
      out.pop_back();
    else
      out.push_back(letter);
  }
  return out;
}

Word inverse_word(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

PartialAction PartialAction::finite(std::vector<std::string> generators,
                                    std::vector<std::string> points,
                                    std::vector<std::vector<std::optional<int>>> tables) {
  PartialAction a;
  a.gens_ = std::move(generators);
  a.finite_ = true;
  a.points_ = std::move(points);
  a.fwd_ = std::move(tables);
  if (a.fwd_.size() != a.gens_.size())
    fail(Errc::bad_input, "one table per generator required");
  int n = static_cast<int>(a.points_.size());
  a.bwd_.assign(a.gens_.size(), std::vector<std::optional<int>>(n));
  for (size_t g = 0; g < a.fwd_.size(); ++g) {
    if (static_cast<int>(a.fwd_[g].size()) != n)
      fail(Errc::bad_input, "table size mismatch");
    for (int x = 0; x < n; ++x) {
      if (!a.fwd_[g][x]) continue;
      int y = *a.fwd_[g][x];
      if (y < 0 || y >= n) fail(Errc::bad_input, "table image out of range");
      if (a.bwd_[g][y]) fail(Errc::bad_input, "generator table is not injective");
      a.bwd_[g][y] = x;
    }
  }
  return a;
}

PartialAction PartialAction::piecewise(std::vector<std::string> generators,
                                       std::vector<PiecewiseMap> maps) {
  PartialAction a;
  a.gens_ = std::move(generators);
  a.finite_ = false;
  a.maps_ = std::move(maps);
  if (a.maps_.size() != a.gens_.size()) fail(Errc::bad_input, "one map per generator required");
  for (size_t i = 1; i < a.maps_.size(); ++i)
    if (a.maps_[i].model() != a.maps_[0].model())
      fail(Errc::mixed_model, "generator maps of different models");
  return a;
}

PartialAction PartialAction::from_spec(const PartialSpecFile& spec) {
  if (spec.finite_carrier) {
    std::vector<std::vector<std::optional<int>>> tables;
    auto index_of = [&](const std::string& name) {
      for (size_t i = 0; i < spec.finite_points.size(); ++i)
        if (spec.finite_points[i] == name) return static_cast<int>(i);
      fail(Errc::parse_error, "unknown carrier point '" + name + "'");
    };
    for (const std::string& g : spec.generators) {
      std::vector<std::optional<int>> t(spec.finite_points.size());
      auto it = spec.tables.find(g);
      if (it != spec.tables.end())
        for (const auto& [from, to] : it->second) t[index_of(from)] = index_of(to);
      tables.push_back(std::move(t));
    }
    return finite(spec.generators, spec.finite_points, std::move(tables));
  }
  ParseSession session{spec.surd_base};
  std::vector<PiecewiseMap> maps;
  for (const std::string& s : spec.piecewise_maps) maps.push_back(parse_map(s, session));
  if (maps.size() != spec.generators.size())
    fail(Errc::parse_error, "one piecewise map per generator required");
  return piecewise(spec.generators, std::move(maps));
}

std::optional<PointId> PartialAction::apply_letter(int letter, PointId x) const {
  int g = (letter > 0 ? letter : -letter) - 1;
  if (g < 0 || g >= generator_count()) fail(Errc::unknown_generator, std::to_string(letter));
  if (finite_) {
    const auto& t = (letter > 0) ? fwd_[g] : bwd_[g];
    return t[x];
  }
  const ProjPoint& p = ppoints_[x];
  std::optional<ProjPoint> r =
      (letter > 0) ? maps_[g].partial_eval(p) : maps_[g].partial_eval_inverse(p);
  if (!r) return std::nullopt;
  return intern_point(*r);
}

std::optional<PointId> PartialAction::apply_word(const Word& reduced, PointId x) const {
  PointId cur = x;
  for (int letter : reduced) {
    auto next = apply_letter(letter, cur);
    if (!next) return std::nullopt;
    cur = *next;
  }
  return cur;
}

std::string PartialAction::point_name(PointId x) const {
  return finite_ ? points_[x] : ppoints_[x].str();
}

PointId PartialAction::intern_point(const ProjPoint& p) const {
  std::string key = p.str();
  auto it = pindex_.find(key);
  if (it != pindex_.end()) return it->second;
  PointId id = static_cast<PointId>(ppoints_.size());
  ppoints_.push_back(p);
  pindex_[key] = id;
  return id;
}

PointId PartialAction::point_by_name(const std::string& name, const ParseSession& session) const {
  if (finite_) {
    for (size_t i = 0; i < points_.size(); ++i)
      if (points_[i] == name) return static_cast<int>(i);
    fail(Errc::bad_input, "unknown carrier point '" + name + "'");
  }
  return intern_point(parse_point(name, session));
}

std::vector<PointId> PartialAction::default_seeds() const {
  std::vector<PointId> out;
  if (finite_) {
    for (size_t i = 0; i < points_.size(); ++i) out.push_back(static_cast<int>(i));
    return out;
  }
  std::vector<ProjPoint> pts;
  for (const PiecewiseMap& m : maps_)
    for (const ProjPoint& b : m.breakpoints()) pts.push_back(b);
  std::sort(pts.begin(), pts.end(), [](const ProjPoint& a, const ProjPoint& b) {
    return compare(a, b) < 0;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (const ProjPoint& p : pts) out.push_back(intern_point(p));
  return out;
}

GlobalizationBall globalize_ball(const PartialAction& action, std::vector<PointId> seeds,
                                 int radius) {
  if (seeds.empty())
    fail(Errc::radius_zero_with_empty_seeds, "globalization needs at least one seed");
  if (radius < 0) fail(Errc::bad_input, "radius must be >= 0");
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  GlobalizationBall ball;
  ball.action_ = &action;
  ball.radius_ = radius;
  int L = ball.letter_count();

  std::map<std::pair<Word, PointId>, int> index;
  auto add_class = [&](const Word& w, PointId x, int depth) {
    int id = static_cast<int>(ball.classes_.size());
    ball.classes_.push_back({w, x, depth});
    ball.edges_.emplace_back(L, -1);
    index[{w, x}] = id;
    return id;
  };
  for (PointId s : seeds) ball.seeds_.push_back(add_class({}, s, 0));

  for (size_t cur = 0; cur < ball.classes_.size(); ++cur) {
    int depth = ball.classes_[cur].depth;
    for (int li = 0; li < L; ++li) {
      int letter = GlobalizationBall::index_letter(li);
      Word w = ball.classes_[cur].word;
      PointId x = ball.classes_[cur].point;
      // the class of letter * (w, x), as an absorbed pair
      Word key_w;
      PointId key_x = x;
      if (!w.empty() && w.back() == -letter) {
        key_w = Word(w.begin(), w.end() - 1);
      } else if (w.empty()) {
        auto y = action.apply_letter(letter, x);
        if (y) {
          key_x = *y;  // stays in the seed level of the globalization
        } else {
          key_w = {letter};
        }
      } else {
        key_w = w;
        key_w.push_back(letter);
      }
      auto it = index.find({key_w, key_x});
      if (it != index.end()) {
        ball.edges_[cur][li] = it->second;
      } else if (depth < radius) {
        ball.edges_[cur][li] = add_class(key_w, key_x, depth + 1);
      }  // else: outside the ball, stays -1
    }
  }
  return ball;
}

bool GlobalizationBall::closed() const {
  for (const auto& row : edges_)
    for (int e : row)
      if (e < 0) return false;
  return true;
}

std::vector<int> GlobalizationBall::boundary() const {
  std::vector<int> out;
  for (size_t i = 0; i < classes_.size(); ++i)
    if (classes_[i].depth == radius_) out.push_back(static_cast<int>(i));
  return out;
}

CommensuratedResult commensurated_check(const GlobalizationBall& ball,
                                        const std::vector<int>& subset, bool complement) {
  // X symmetric-difference sX equals its complement's difference, so the
  // listed classes drive the computation in both representations.
  (void)complement;
  CommensuratedResult out;
  std::set<int> X(subset.begin(), subset.end());
  const auto& gens = ball.action().generators();
  for (int g = 0; g < ball.action().generator_count(); ++g) {
    int li = GlobalizationBall::letter_index(g + 1);
    std::set<int> sX;
    for (int c : X) {
      int t = ball.edge(c, li);
      if (t < 0)
        fail(Errc::ball_too_small, "edge " + gens[g] + " of class " + std::to_string(c) +
                                       " leaves the ball; raise the radius");
      sX.insert(t);
    }
    CommensuratedResult::PerGenerator pg;
    pg.generator = gens[g];
    for (int c : X)
      if (!sX.count(c)) pg.difference.push_back(c);
    for (int c : sX)
      if (!X.count(c)) pg.difference.push_back(c);
    std::sort(pg.difference.begin(), pg.difference.end());
    pg.stale = false;
    for (int c : pg.difference)
      if (ball.classes()[c].depth == ball.radius()) pg.stale = true;
    if (pg.stale) out.all_finite_certified = false;
    out.per_generator.push_back(std::move(pg));
  }
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) {
    for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

NeumannReport neumann_trim(const GlobalizationBall& ball, const std::vector<int>& X,
                           int subset_bound) {
  size_t n = ball.classes().size();
  int L = ball.letter_count();
  UnionFind uf(n);
  std::vector<bool> open_component(n, false);  // indexed by root after pass
  for (size_t c = 0; c < n; ++c)
    for (int li = 0; li < L; ++li) {
      int t = ball.edge(static_cast<int>(c), li);
      if (t >= 0) uf.unite(static_cast<int>(c), t);
    }
  std::vector<bool> has_outside(n, false);
  for (size_t c = 0; c < n; ++c)
    for (int li = 0; li < L; ++li)
      if (ball.edge(static_cast<int>(c), li) < 0) has_outside[uf.find(static_cast<int>(c))] = true;
  (void)open_component;

  std::set<int> Xset(X.begin(), X.end());
  std::set<int> removed_roots;
  for (size_t c = 0; c < n; ++c) {
    if (Xset.count(static_cast<int>(c))) continue;
    int root = uf.find(static_cast<int>(c));
    if (has_outside[root])
      fail(Errc::not_closed,
           "orbit of class " + std::to_string(c) + " is truncated; cannot certify finiteness");
    removed_roots.insert(root);
  }

  NeumannReport report;
  for (size_t c = 0; c < n; ++c) {
    if (removed_roots.count(uf.find(static_cast<int>(c))))
      report.removed.push_back(static_cast<int>(c));
    else
      report.kept.push_back(static_cast<int>(c));
  }

  // Exhaustive translation check over subsets F of Y with |F| <= bound.
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  auto rec = [&](auto&& self, size_t start) -> void {
    if (!cur.empty()) subsets.push_back(cur);
    if (static_cast<int>(cur.size()) >= subset_bound) return;
    for (size_t i = start; i < report.kept.size(); ++i) {
      cur.push_back(report.kept[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  for (const auto& F : subsets) {
    // breadth-first over images of F until some image lies inside X
    std::set<std::vector<int>> seen;
    std::deque<std::pair<std::vector<int>, Word>> queue;
    queue.push_back({F, {}});
    seen.insert(F);
    bool found = false;
    while (!queue.empty() && !found) {
      auto [S, w] = queue.front();
      queue.pop_front();
      bool inside = true;
      for (int c : S)
        if (!Xset.count(c)) inside = false;
      if (inside) {
        report.checks.push_back({F, w});
        found = true;
        break;
      }
      for (int li = 0; li < L; ++li) {
        std::vector<int> T;
        bool ok = true;
        for (int c : S) {
          int t = ball.edge(c, li);
          if (t < 0) {
            ok = false;
            break;
          }
          T.push_back(t);
        }
        if (!ok) continue;
        std::sort(T.begin(), T.end());
        T.erase(std::unique(T.begin(), T.end()), T.end());
        if (seen.insert(T).second) {
          Word w2 = w;
          w2.push_back(GlobalizationBall::index_letter(li));
          queue.push_back({T, reduce_word(w2)});
        }
      }
    }
    if (!found) report.unwitnessed.push_back(F);
  }
  return report;
}

EndsReport ends_estimate(const GlobalizationBall& ball, int collar) {
  if (!(ball.radius() > collar && collar >= 1))
    fail(Errc::bad_input, "need radius > collar >= 1");
  EndsReport report;
  report.collar = collar;
  size_t n = ball.classes().size();
  int L = ball.letter_count();
  for (int rho = collar + 1; rho <= ball.radius(); ++rho) {
    std::vector<bool> in_collar(n, false);
    for (size_t c = 0; c < n; ++c) {
      int d = ball.classes()[c].depth;
      if (d > rho - collar && d <= rho) in_collar[c] = true;
    }
    UnionFind uf(n);
    for (size_t c = 0; c < n; ++c) {
      if (!in_collar[c]) continue;
      for (int li = 0; li < L; ++li) {
        int t = ball.edge(static_cast<int>(c), li);
        if (t >= 0 && in_collar[t]) uf.unite(static_cast<int>(c), t);
      }
    }
    std::set<int> touching;
    for (size_t c = 0; c < n; ++c)
      if (in_collar[c] && ball.classes()[c].depth == rho) touching.insert(uf.find(static_cast<int>(c)));
    report.per_radius.push_back({rho, static_cast<int>(touching.size())});
  }
  report.value = report.per_radius.empty() ? 0 : report.per_radius.back().second;
  report.stable_from = ball.radius();
  for (int i = static_cast<int>(report.per_radius.size()) - 1; i >= 0; --i) {
    if (report.per_radius[i].second != report.value) break;
    report.stable_from = report.per_radius[i].first;
  }
  return report;
}

namespace {

void all_reduced_words(int gens, int max_len, std::vector<Word>& out) {
  out.push_back({});
  std::vector<Word> level = {{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : level)
      for (int g = 1; g <= gens; ++g)
        for (int s : {g, -g}) {
          if (!w.empty() && w.back() == -s) continue;
          Word w2 = w;
          w2.push_back(s);
          next.push_back(w2);
        }
    for (const Word& w : next) out.push_back(w);
    level = std::move(next);
  }
}

}  // namespace

AxiomReport verify_axioms(const PartialAction& action, int word_len_bound, int sample_bound,
                          const std::vector<Word>& relations) {
  AxiomReport report;
  std::vector<PointId> samples;
  if (action.finite_carrier()) {
    samples = action.default_seeds();
  } else {
    samples = action.default_seeds();
    for (int i = 1; i < 17 && static_cast<int>(samples.size()) < sample_bound; ++i) {
      ProjPoint p = ProjPoint::finite(Scalar(i, 17));
      samples.push_back(action.intern_point(p));
    }
  }
  if (static_cast<int>(samples.size()) > sample_bound) samples.resize(sample_bound);
  report.sample_count = static_cast<int>(samples.size());

  std::vector<Word> words;
  all_reduced_words(action.generator_count(), word_len_bound, words);
  report.words_checked = static_cast<int>(words.size());

  auto name = [&](const Word& w) { return word_str(w, action.generators()); };

  for (PointId x : samples) {
    auto y = action.apply_word({}, x);
    if (!y || *y != x) {
      report.pass = false;
      report.violations.push_back({"identity", "alpha(e) moved " + action.point_name(x)});
    }
  }
  for (const Word& w : words) {
    Word winv = inverse_word(w);
    for (PointId x : samples) {
      auto y = action.apply_word(w, x);
      if (!y) continue;
      auto back = action.apply_word(winv, *y);
      if (!back || *back != x) {
        report.pass = false;
        report.violations.push_back(
            {"inverse", name(w) + " at " + action.point_name(x) + " is not inverted"});
      }
    }
  }
  for (const Word& w1 : words) {
    for (const Word& w2 : words) {
      Word prod = reduce_word([&] {
        Word w = w2;
        w.insert(w.end(), w1.begin(), w1.end());
        return w;
      }());
      for (PointId x : samples) {
        auto y = action.apply_word(w2, x);
        if (!y) continue;
        auto z = action.apply_word(w1, *y);
        if (!z) continue;
        auto direct = action.apply_word(prod, x);
        if (!direct || *direct != *z) {
          report.pass = false;
          report.violations.push_back({"extension", "alpha(" + name(w1) + ")alpha(" + name(w2) +
                                                        ") not contained in alpha(product) at " +
                                                        action.point_name(x)});
        }
      }
    }
  }
  for (const Word& rel : relations) {
    Word r = reduce_word(rel);
    for (PointId x : samples) {
      auto y = action.apply_word(r, x);
      if (y && *y != x) {
        report.pass = false;
        report.violations.push_back(
            {"relation", name(rel) + " moves " + action.point_name(x) + " to " +
                             action.point_name(*y)});
      }
    }
  }
  return report;
}

}  // namespace pw1d
