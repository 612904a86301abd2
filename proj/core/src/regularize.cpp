#include "pw1d/regularize.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace pw1d {

namespace {

Scalar frac(const Scalar& x) { return x - Scalar(x.floor()); }
Scalar eval_affine(const Homography& e, const Scalar& x) { return e.slope() * x + e.offset(); }

Scalar pow_int(const Scalar& s, int e) {
  Scalar r(1);
  Scalar b = e >= 0 ? s : s.inverse();
  for (int k = 0; k < (e >= 0 ? e : -e); ++k) r *= b;
  return r;
}

std::optional<Scalar> solve_root(const Scalar& r, int d, unsigned long base) {
  if (r.sign() <= 0) return std::nullopt;
  if (d == 1) return r;
  if (d == 2) return Scalar::sqrt(r, base);
  if (!r.is_rational()) return std::nullopt;
  mpz_class num = r.rat().get_num(), den = r.rat().get_den();
  mpz_class rn, rd;
  int exact_n = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), d);
  int exact_d = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), d);
  if (!exact_n || !exact_d) return std::nullopt;
  mpq_class q(rn, rd);
  q.canonicalize();
  return Scalar(q);
}

unsigned long deduce_base(const std::vector<PiecewiseMap>& group) {
  for (const PiecewiseMap& f : group)
    for (const Piece& p : f.pieces()) {
      for (const Scalar* s : {&p.map.a(), &p.map.b(), &p.map.c(), &p.map.d()})
        if (s->base()) return s->base();
      if (!p.left.is_infinity() && p.left.value().base()) return p.left.value().base();
    }
  return 0;
}

// Orientation-preserving homography pinning `from` to `to`.
Homography pin_germ(const ProjPoint& from, const ProjPoint& to) {
  if (!from.is_infinity() && !to.is_infinity())
    return Homography::affine(Scalar(1), to.value() - from.value());
  if (from.is_infinity() && to.is_infinity()) return Homography();
  if (from.is_infinity())  // x -> (vx - 1)/x maps inf to v with positive derivative
    return Homography(to.value(), Scalar(-1), Scalar(1), Scalar(0));
  return Homography(from.value(), Scalar(-1), Scalar(1), Scalar(0)).inverse();
}

}  // namespace

std::vector<PiecewiseMap> enumerate_group(const std::vector<PiecewiseMap>& generators,
                                          size_t bound) {
  if (generators.empty()) fail(Errc::bad_input, "no generators");
  Model model = generators[0].model();
  for (const auto& g : generators)
    if (g.model() != model) fail(Errc::mixed_model, "generators of different models");
  std::vector<PiecewiseMap> elements;
  auto contains = [&](const PiecewiseMap& m) {
    for (const auto& e : elements)
      if (e == m) return true;
    return false;
  };
  elements.push_back(PiecewiseMap::identity(model));
  std::vector<PiecewiseMap> agenda = generators;
  for (const auto& g : generators) agenda.push_back(g.inverse());
  for (const auto& g : agenda)
    if (!contains(g)) elements.push_back(g);
  for (size_t i = 0; i < elements.size(); ++i) {
    for (const auto& g : agenda) {
      PiecewiseMap prod = elements[i].compose(g);
      if (!contains(prod)) {
        elements.push_back(prod);
        if (elements.size() > bound)
          fail(Errc::too_large, "group exceeds " + std::to_string(bound) + " elements");
      }
    }
  }
  std::sort(elements.begin(), elements.end(),
            [](const PiecewiseMap& a, const PiecewiseMap& b) { return compare(a, b) < 0; });
  return elements;
}

namespace {

using EndPair = std::pair<int, int>;
EndPair norm_pair(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// phi(x) = sgn * coef * s^exp * (x - from) + to, in lift coordinates.
struct SymGerm {
  int sgn = 1;
  Scalar coef = Scalar(1);
  int exp = 0;
  Scalar from, to;
};

SymGerm invert_sym(const SymGerm& g) {
  SymGerm r;
  r.sgn = g.sgn;
  r.coef = g.coef.inverse();
  r.exp = -g.exp;
  r.from = g.to;
  r.to = g.from;
  return r;
}

struct OrbitData {
  std::vector<EndPair> pairs;
  std::map<EndPair, SymGerm> sym;       // circ
  std::map<EndPair, Homography> conc;   // proj
  std::optional<Scalar> scale;
  bool inconsistent = false;
  bool unsolved = false;
};

struct Builder {
  Model model;
  std::vector<PiecewiseMap> G;
  unsigned long base = 0;
  std::vector<Scalar> cutC;     // circ: sorted, cutC[0] == 0
  std::vector<ProjPoint> cutP;  // proj: circularly sorted
  int m = 0;
  std::vector<std::vector<Homography>> germ;
  std::vector<std::vector<int>> pi;
  std::vector<std::vector<int>> orient;

  Scalar arc_lo(int i) const { return cutC[i]; }
  Scalar arc_hi(int i) const { return i + 1 < m ? cutC[i + 1] : Scalar(1); }
  ProjPoint end_point(int e) const {
    int a = e / 2;
    return (e & 1) ? cutP[(a + 1) % m] : cutP[a];
  }
  Scalar end_lift(int e) const {
    int a = e / 2;
    return (e & 1) ? arc_hi(a) : arc_lo(a);
  }
  int act_end(int u, int e) const {
    int a = e / 2, r = e & 1;
    int j = pi[u][a];
    int r2 = (orient[u][a] < 0) ? 1 - r : r;
    return 2 * j + r2;
  }

  void check_group() {
    if (G.empty()) fail(Errc::not_a_group, "empty element set");
    model = G[0].model();
    for (const auto& g : G)
      if (g.model() != model) fail(Errc::mixed_model, "elements of different models");
    auto contains = [&](const PiecewiseMap& f) {
      for (const auto& e : G)
        if (e == f) return true;
      return false;
    };
    if (!contains(PiecewiseMap::identity(model)))
      fail(Errc::not_a_group, "identity element missing");
    for (const auto& g : G)
      if (!contains(g.inverse())) fail(Errc::not_a_group, "not closed under inverse");
    for (const auto& g : G)
      for (const auto& h : G)
        if (!contains(g.compose(h))) fail(Errc::not_a_group, "not closed under composition");
  }

  std::pair<Scalar, Scalar> sides_circ(const PiecewiseMap& u, const Scalar& b) const {
    const auto& pieces = u.pieces();
    size_t n = pieces.size();
    size_t ri = u.piece_index_at(ProjPoint::finite(b));
    Scalar right = frac(eval_affine(pieces[ri].map, b));
    size_t li;
    Scalar lift = b;
    if (b.is_zero()) {
      li = n - 1;
      lift = Scalar(1);
    } else if (pieces[ri].left.value() == b) {
      li = (ri + n - 1) % n;
    } else {
      li = ri;
    }
    Scalar left = frac(eval_affine(pieces[li].map, lift));
    return {left, right};
  }
  std::pair<ProjPoint, ProjPoint> sides_proj(const PiecewiseMap& u, const ProjPoint& b) const {
    const auto& pieces = u.pieces();
    size_t n = pieces.size();
    size_t ri = u.piece_index_at(b);
    ProjPoint right = pieces[ri].map.apply(b);
    size_t li = (n > 1 && pieces[ri].left == b) ? (ri + n - 1) % n : ri;
    ProjPoint left = pieces[li].map.apply(b);
    return {left, right};
  }

  void build_cuts() {
    if (model == Model::circ) {
      std::set<std::string> seen;
      std::vector<Scalar> cuts;
      auto add = [&](const Scalar& s) {
        if (seen.insert(s.str()).second) cuts.push_back(s);
      };
      for (const auto& g : G)
        for (const auto& b : g.breakpoints()) add(b.value());
      if (cuts.empty()) add(Scalar(0));
      for (int pass = 0;; ++pass) {
        if (pass > 64) fail(Errc::bad_input, "internal: cut set failed to close");
        size_t before = cuts.size();
        std::vector<Scalar> snapshot = cuts;
        for (const auto& g : G)
          for (const Scalar& b : snapshot) {
            auto [l, r] = sides_circ(g, b);
            add(l);
            add(r);
          }
        if (cuts.size() == before) break;
      }
      std::sort(cuts.begin(), cuts.end());
      cutC = std::move(cuts);
      if (!cutC[0].is_zero()) fail(Errc::bad_input, "internal: circ cut set must contain 0");
      m = static_cast<int>(cutC.size());
    } else {
      std::set<std::string> seen;
      std::vector<ProjPoint> cuts;
      auto add = [&](const ProjPoint& p) {
        if (seen.insert(p.str()).second) cuts.push_back(p);
      };
      for (const auto& g : G)
        for (const auto& b : g.breakpoints()) add(b);
      if (cuts.empty()) {
        add(ProjPoint::infinity());
        add(ProjPoint::finite(Scalar(0)));
      }
      for (int pass = 0;; ++pass) {
        if (pass > 64) fail(Errc::bad_input, "internal: cut set failed to close");
        size_t before = cuts.size();
        std::vector<ProjPoint> snapshot = cuts;
        for (const auto& g : G)
          for (const ProjPoint& b : snapshot) {
            auto [l, r] = sides_proj(g, b);
            add(l);
            add(r);
          }
        if (cuts.size() == before) break;
      }
      std::sort(cuts.begin(), cuts.end(),
                [](const ProjPoint& a, const ProjPoint& b) { return compare(a, b) < 0; });
      cutP = std::move(cuts);
      m = static_cast<int>(cutP.size());
    }
  }

  void build_tables() {
    int N = static_cast<int>(G.size());
    germ.assign(N, {});
    pi.assign(N, std::vector<int>(m, -1));
    orient.assign(N, std::vector<int>(m, 1));
    for (int u = 0; u < N; ++u) {
      germ[u].reserve(m);
      for (int i = 0; i < m; ++i) {
        if (model == Model::circ) {
          size_t p = G[u].piece_index_at(ProjPoint::finite(cutC[i]));
          Homography e = G[u].pieces()[p].map;
          Scalar x = eval_affine(e, arc_lo(i)), y = eval_affine(e, arc_hi(i));
          int sgn = e.slope().sign();
          Scalar lo = sgn > 0 ? x : y, hi = sgn > 0 ? y : x;
          int j = -1;
          for (int k = 0; k < m; ++k)
            if (cutC[k] == lo) j = k;
          if (j < 0 || arc_hi(j) != hi)
            fail(Errc::bad_input, "internal: cut set not invariant under the group");
          germ[u].push_back(e);
          pi[u][i] = j;
          orient[u][i] = sgn;
        } else {
          size_t p = G[u].piece_index_at(cutP[i]);
          Homography e = G[u].pieces()[p].map;
          ProjPoint x = e.apply(cutP[i]), y = e.apply(cutP[(i + 1) % m]);
          int sgn = e.orientation();
          ProjPoint lo = sgn > 0 ? x : y, hi = sgn > 0 ? y : x;
          int j = -1;
          for (int k = 0; k < m; ++k)
            if (cutP[k] == lo) j = k;
          if (j < 0 || !(cutP[(j + 1) % m] == hi))
            fail(Errc::bad_input, "internal: cut set not invariant under the group");
          germ[u].push_back(e);
          pi[u][i] = j;
          orient[u][i] = sgn;
        }
      }
    }
  }
};

// Components of the arc graph given one gluing per end at most; branched
// ends (hand-built non-Hausdorff data) yield flagged components without a
// traversal.
std::vector<ManifoldComponent> trace_components(int m,
                                                const std::vector<std::pair<int, int>>& glue_ends) {
  std::vector<std::vector<int>> at_end(2 * m);
  for (size_t g = 0; g < glue_ends.size(); ++g) {
    at_end[glue_ends[g].first].push_back(static_cast<int>(g));
    at_end[glue_ends[g].second].push_back(static_cast<int>(g));
  }
  std::vector<bool> branched(m, false);
  for (int e = 0; e < 2 * m; ++e)
    if (at_end[e].size() > 1) branched[e / 2] = true;
  std::vector<int> parent(m);
  for (int i = 0; i < m; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : glue_ends) parent[find(g.first / 2)] = find(g.second / 2);
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < m; ++i) groups[find(i)].push_back(i);

  std::vector<ManifoldComponent> out;
  for (auto& [root, arcs] : groups) {
    bool flagged = false;
    for (int a : arcs)
      if (branched[a]) flagged = true;
    if (flagged) {
      ManifoldComponent c;
      c.arcs = arcs;
      c.hausdorff = false;
      out.push_back(std::move(c));
      continue;
    }
    auto glue_at = [&](int e) { return at_end[e].empty() ? -1 : at_end[e][0]; };
    int start = arcs[0], entry = 0;
    bool chain = false;
    for (int a : arcs) {
      for (int side = 0; side < 2 && !chain; ++side)
        if (glue_at(2 * a + side) < 0) {
          start = a;
          entry = side;
          chain = true;
        }
      if (chain) break;
    }
    ManifoldComponent c;
    int a = start, in_side = entry;
    while (true) {
      c.arcs.push_back(a);
      int exit_end = 2 * a + (1 - in_side);
      int g = glue_at(exit_end);
      if (g < 0) {
        c.cycle = false;
        break;
      }
      c.gluings.push_back(g);
      c.cross_via_a.push_back(glue_ends[g].first == exit_end);
      int oe = (glue_ends[g].first == exit_end) ? glue_ends[g].second : glue_ends[g].first;
      if (oe / 2 == c.arcs.front() && (oe & 1) == entry && c.gluings.size() == c.arcs.size()) {
        c.cycle = true;
        break;
      }
      a = oe / 2;
      in_side = oe & 1;
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

ChartedManifold cut_and_glue(const std::vector<PiecewiseMap>& group) {
  Builder B;
  B.G = group;
  std::sort(B.G.begin(), B.G.end(),
            [](const PiecewiseMap& a, const PiecewiseMap& b) { return compare(a, b) < 0; });
  B.check_group();
  B.base = deduce_base(B.G);
  B.build_cuts();
  B.build_tables();
  int N = static_cast<int>(B.G.size());
  int m = B.m;

  // The adjacency pair at each cut seeds a candidate gluing; its G-orbit
  // must glue equivariantly for the group to act by chart automorphisms.
  std::vector<OrbitData> orbits;
  std::map<EndPair, int> pair_orbit;
  for (int j = 0; j < m; ++j) {
    int left_arc = (j + m - 1) % m;
    EndPair seed = norm_pair(2 * left_arc + 1, 2 * j);
    if (pair_orbit.count(seed)) continue;
    OrbitData od;
    std::set<EndPair> in_orbit;
    for (int u = 0; u < N; ++u) {
      EndPair p = norm_pair(B.act_end(u, seed.first), B.act_end(u, seed.second));
      if (in_orbit.insert(p).second) od.pairs.push_back(p);
    }
    int id = static_cast<int>(orbits.size());
    for (const EndPair& p : od.pairs) pair_orbit[p] = id;
    orbits.push_back(std::move(od));
  }

  // Ends claimed by two candidate gluings are non-separated germs of the
  // globalization; trim every orbit touching one (whole orbits, so the
  // result stays invariant) and report.
  std::map<int, int> claims;
  for (const auto& od : orbits)
    for (const EndPair& p : od.pairs) {
      claims[p.first]++;
      claims[p.second]++;
    }
  std::vector<bool> discarded(orbits.size(), false);
  std::vector<std::string> trims;
  for (size_t oi = 0; oi < orbits.size(); ++oi)
    for (const EndPair& p : orbits[oi].pairs)
      if (claims[p.first] > 1 || claims[p.second] > 1) discarded[oi] = true;
  for (size_t oi = 0; oi < orbits.size(); ++oi)
    if (discarded[oi])
      trims.push_back("trimmed non-separated germ orbit with " +
                      std::to_string(orbits[oi].pairs.size()) + " gluing candidates");

  // Solve transition germs per kept orbit.
  for (size_t oi = 0; oi < orbits.size(); ++oi) {
    if (discarded[oi]) continue;
    OrbitData& od = orbits[oi];
    EndPair seedp = od.pairs[0];
    if (B.model == Model::circ) {
      SymGerm seed_germ;
      seed_germ.sgn = ((seedp.first & 1) != (seedp.second & 1)) ? 1 : -1;
      seed_germ.exp = 1;
      seed_germ.from = B.end_lift(seedp.first);
      seed_germ.to = B.end_lift(seedp.second);
      od.sym[seedp] = seed_germ;
      std::vector<EndPair> agenda = {seedp};
      while (!agenda.empty() && !od.inconsistent) {
        EndPair cur = agenda.back();
        agenda.pop_back();
        SymGerm g = od.sym[cur];
        for (int u = 0; u < N && !od.inconsistent; ++u) {
          const Homography& lam = B.germ[u][cur.first / 2];
          const Homography& rho = B.germ[u][cur.second / 2];
          int e1 = B.act_end(u, cur.first), e2 = B.act_end(u, cur.second);
          SymGerm ng;
          Scalar pl = lam.slope(), pr = rho.slope();
          ng.sgn = g.sgn * pl.sign() * pr.sign();
          Scalar mag = pr / pl;
          if (mag.sign() < 0) mag = -mag;
          ng.coef = g.coef * mag;
          ng.exp = g.exp;
          ng.from = eval_affine(lam, g.from);
          ng.to = eval_affine(rho, g.to);
          EndPair np = norm_pair(e1, e2);
          if (e1 > e2) ng = invert_sym(ng);
          auto it = od.sym.find(np);
          if (it == od.sym.end()) {
            od.sym[np] = ng;
            agenda.push_back(np);
            continue;
          }
          const SymGerm& old = it->second;
          if (old.from != ng.from || old.to != ng.to || old.sgn != ng.sgn) {
            od.inconsistent = true;
            break;
          }
          if (old.exp == ng.exp) {
            if (old.coef != ng.coef) od.inconsistent = true;
            continue;
          }
          int d = old.exp - ng.exp;
          Scalar ratio = ng.coef / old.coef;
          if (d < 0) {
            d = -d;
            ratio = ratio.inverse();
          }
          auto root = solve_root(ratio, d, B.base);
          if (!root || (od.scale && !(*od.scale == *root))) {
            od.inconsistent = true;
            break;
          }
          od.scale = *root;
        }
      }
      if (od.scale && !od.inconsistent)
        for (auto& [p, g] : od.sym) {
          g.coef = g.coef * pow_int(*od.scale, g.exp);
          g.exp = 0;
        }
      if (od.inconsistent) {
        discarded[oi] = true;
        trims.push_back("trimmed orbit without an equivariant affine transition");
      }
    } else {
      // seed pairs are adjacency pairs: opposite end parities, so the
      // orientation-preserving pin germ is the chart continuation
      Homography seed_germ = pin_germ(B.end_point(seedp.first), B.end_point(seedp.second));
      od.conc[seedp] = seed_germ;
      std::vector<EndPair> agenda = {seedp};
      while (!agenda.empty()) {
        EndPair cur = agenda.back();
        agenda.pop_back();
        Homography g = od.conc[cur];
        for (int u = 0; u < N; ++u) {
          Homography ng =
              B.germ[u][cur.second / 2].compose(g).compose(B.germ[u][cur.first / 2].inverse());
          int e1 = B.act_end(u, cur.first), e2 = B.act_end(u, cur.second);
          EndPair np = norm_pair(e1, e2);
          if (e1 > e2) ng = ng.inverse();
          auto it = od.conc.find(np);
          if (it == od.conc.end()) {
            od.conc[np] = ng;
            agenda.push_back(np);
          } else if (!(it->second == ng)) {
            od.unsolved = true;
          }
        }
      }
    }
  }

  // Final gluing list (deterministic order) and components.
  struct RawGlue {
    EndPair p;
    int orbit;
  };
  std::vector<RawGlue> raw;
  for (size_t oi = 0; oi < orbits.size(); ++oi) {
    if (discarded[oi]) continue;
    for (const EndPair& p : orbits[oi].pairs) raw.push_back({p, static_cast<int>(oi)});
  }
  std::sort(raw.begin(), raw.end(), [](const RawGlue& a, const RawGlue& b) { return a.p < b.p; });
  std::vector<std::pair<int, int>> glue_ends;
  for (const RawGlue& rg : raw) glue_ends.push_back(rg.p);
  std::vector<ManifoldComponent> comps = trace_components(m, glue_ends);

  // Fix free scales so cycle holonomies become translations where possible.
  if (B.model == Model::circ) {
    for (const auto& comp : comps) {
      if (!comp.cycle) continue;
      int sgn = 1;
      Scalar C(1);
      std::map<int, int> exps;
      for (size_t k = 0; k < comp.gluings.size(); ++k) {
        const RawGlue& rg = raw[comp.gluings[k]];
        const OrbitData& od = orbits[rg.orbit];
        SymGerm cross = od.sym.at(rg.p);
        if (!comp.cross_via_a[k]) cross = invert_sym(cross);
        SymGerm inv = invert_sym(cross);  // holonomy composes the inverses
        sgn *= inv.sgn;
        C *= inv.coef;
        if (!od.scale && inv.exp != 0) exps[rg.orbit] += inv.exp;
      }
      if (sgn < 0) continue;  // no positive scale can fix a reversing holonomy
      for (auto& [oi, e] : exps) {
        if (e == 0 || orbits[oi].scale) continue;
        Scalar target = C.inverse();
        int d = e;
        if (d < 0) {
          d = -d;
          target = target.inverse();
        }
        auto root = solve_root(target, d, B.base);
        if (!root) continue;
        orbits[oi].scale = *root;
        for (auto& [p, g] : orbits[oi].sym) {
          g.coef = g.coef * pow_int(*root, g.exp);
          g.exp = 0;
        }
        break;
      }
    }
    for (auto& od : orbits)  // leftover free scales default to 1
      for (auto& [p, g] : od.sym) g.exp = 0;
  }

  ChartedManifold out;
  out.model_ = B.model;
  for (int i = 0; i < m; ++i) {
    if (B.model == Model::circ)
      out.arcs_.push_back({ProjPoint::finite(B.arc_lo(i)), ProjPoint::finite(B.arc_hi(i))});
    else
      out.arcs_.push_back({B.cutP[i], B.cutP[(i + 1) % m]});
  }
  for (const RawGlue& rg : raw) {
    Homography t;
    if (B.model == Model::circ) {
      const SymGerm& g = orbits[rg.orbit].sym.at(rg.p);
      Scalar slope = Scalar(g.sgn) * g.coef;
      t = Homography::affine(slope, g.to - slope * g.from);
    } else {
      t = orbits[rg.orbit].conc.at(rg.p);
    }
    out.gluings_.push_back({rg.p.first, rg.p.second, t});
  }
  for (auto& comp : comps)
    for (int g : comp.gluings)
      if (orbits[raw[g].orbit].unsolved) comp.solved = false;
  out.components_ = std::move(comps);
  out.trimmed_ = std::move(trims);
  return out;
}

ChartedManifold ChartedManifold::from_parts(Model model, std::vector<ManifoldArc> arcs,
                                            std::vector<ManifoldGluing> gluings) {
  ChartedManifold out;
  out.model_ = model;
  out.arcs_ = std::move(arcs);
  out.gluings_ = std::move(gluings);
  if (out.arcs_.empty()) fail(Errc::bad_input, "a manifold needs at least one arc");
  int m = static_cast<int>(out.arcs_.size());
  for (const auto& a : out.arcs_) {
    if (model == Model::circ &&
        (a.lo.is_infinity() || a.hi.is_infinity() || !(a.lo.value() < a.hi.value())))
      fail(Errc::bad_input, "affine chart needs finite lo < hi");
    if (model == Model::proj && a.lo == a.hi) fail(Errc::bad_input, "degenerate arc");
  }
  for (const auto& g : out.gluings_) {
    if (g.end_a < 0 || g.end_a >= 2 * m || g.end_b < 0 || g.end_b >= 2 * m || g.end_a == g.end_b)
      fail(Errc::bad_input, "bad gluing ends");
    if (!(g.transition.apply(out.end_value(g.end_a)) == out.end_value(g.end_b)))
      fail(Errc::bad_input, "transition does not map the glued end values");
  }
  out.compute_components();
  return out;
}

ProjPoint ChartedManifold::end_value(int end) const {
  const ManifoldArc& a = arcs_[end / 2];
  return (end & 1) ? a.hi : a.lo;
}

void ChartedManifold::compute_components() {
  std::vector<std::pair<int, int>> glue_ends;
  for (const auto& g : gluings_) glue_ends.push_back({g.end_a, g.end_b});
  components_ = trace_components(static_cast<int>(arcs_.size()), glue_ends);
}

namespace {

// Developing maps along a component traversal; D[0] is the identity chart of
// comp.arcs[0]. For cycles, sets the holonomy.
std::vector<Homography> develop(const ChartedManifold& M, const ManifoldComponent& comp,
                                Homography* holonomy_out) {
  std::vector<Homography> D = {Homography()};
  Homography cur;
  for (size_t k = 0; k < comp.gluings.size(); ++k) {
    const ManifoldGluing& g = M.gluings()[comp.gluings[k]];
    Homography cross = comp.cross_via_a[k] ? g.transition : g.transition.inverse();
    cur = cur.compose(cross.inverse());
    if (k + 1 < comp.arcs.size())
      D.push_back(cur);
    else if (comp.cycle && holonomy_out)
      *holonomy_out = cur;
  }
  if (holonomy_out && !comp.cycle) *holonomy_out = Homography();
  return D;
}

}  // namespace

Homography holonomy(const ChartedManifold& manifold, int component) {
  const auto& comp = manifold.components().at(component);
  if (!comp.hausdorff) fail(Errc::not_hausdorff, "component has non-separated germs");
  if (!comp.cycle) fail(Errc::not_a_circle, "component is an interval chain");
  Homography H;
  develop(manifold, comp, &H);
  return H;
}

std::string Classification::str() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::open_interval: os << "OpenInterval"; break;
    case Kind::standard_circle: os << "StandardCircle(" << param.str() << ")"; break;
    case Kind::nonstandard_circle: os << "NonstandardCircle(" << param.str() << ")"; break;
    case Kind::projective_cover: os << "ProjectiveCover(" << degree << ")"; break;
    case Kind::unclassified: os << "Unclassified(" << reason << ")"; break;
  }
  return os.str();
}

Classification classify_component(const ChartedManifold& manifold, int component, Model mode) {
  const auto& comp = manifold.components().at(component);
  Classification out;
  if (!comp.hausdorff) fail(Errc::not_hausdorff, "component has non-separated germs");
  if (!comp.solved) {
    out.reason = "transition constraints unresolved";
    return out;
  }
  if (!comp.cycle) {
    out.kind = Classification::Kind::open_interval;
    return out;
  }
  Homography H = holonomy(manifold, component);
  if (mode == Model::circ) {
    if (!H.is_affine()) {
      out.reason = "non-affine holonomy in affine mode";
      return out;
    }
    Scalar s = H.slope();
    if (s == Scalar(1)) {
      Scalar b = H.offset();
      if (b.is_zero()) {
        out.reason = "trivial affine holonomy";
        return out;
      }
      out.kind = Classification::Kind::standard_circle;
      out.param = b.sign() > 0 ? b : -b;
      return out;
    }
    if (s.sign() > 0) {
      out.kind = Classification::Kind::nonstandard_circle;
      out.param = (s > Scalar(1)) ? s : s.inverse();
      return out;
    }
    out.reason = "orientation-reversing holonomy";
    return out;
  }
  if (H.is_identity()) {
    std::vector<Homography> D = develop(manifold, comp, nullptr);
    std::vector<std::pair<ProjPoint, ProjPoint>> devarcs;
    std::set<std::string> endset;
    for (size_t k = 0; k < comp.arcs.size(); ++k) {
      const ManifoldArc& a = manifold.arcs()[comp.arcs[k]];
      ProjPoint u = D[k].apply(a.lo), v = D[k].apply(a.hi);
      if (D[k].orientation() < 0) std::swap(u, v);
      devarcs.push_back({u, v});
      endset.insert(u.str());
      endset.insert(v.str());
    }
    ProjPoint test;
    bool found = false;
    for (long num = 1; !found && num < 100; ++num) {
      ProjPoint cand = ProjPoint::finite(Scalar(num, 97));
      if (!endset.count(cand.str())) {
        test = cand;
        found = true;
      }
    }
    if (!found) fail(Errc::bad_input, "internal: no test point for the developing degree");
    int deg = 0;
    for (auto& [u, v] : devarcs) {
      if (u == v) {
        ++deg;
        continue;
      }
      if (circular_order(u, test, v)) ++deg;
    }
    out.kind = Classification::Kind::projective_cover;
    out.degree = deg > 0 ? deg : 1;
    return out;
  }
  if (H.is_affine() && H.slope() == Scalar(1)) {
    out.reason = "parabolic holonomy";
    return out;
  }
  out.reason = "nontrivial projective holonomy";
  return out;
}

ConjugatorResult conjugator(const std::vector<PiecewiseMap>& group,
                            const ChartedManifold& manifold) {
  (void)group;
  ConjugatorResult res;
  Model mode = manifold.model();
  for (size_t c = 0; c < manifold.components().size(); ++c) {
    try {
      res.classifications.push_back(classify_component(manifold, static_cast<int>(c), mode));
    } catch (const Error& e) {
      Classification cl;
      cl.reason = e.what();
      res.classifications.push_back(cl);
    }
  }
  std::ostringstream rep;
  rep << manifold.components().size() << " component(s):";
  for (const auto& cl : res.classifications) rep << " " << cl.str();
  res.report = rep.str();
  if (manifold.components().size() != 1) fail(Errc::target_not_representable, res.report);
  const Classification& cl = res.classifications[0];
  const ManifoldComponent& comp = manifold.components()[0];
  if (mode == Model::circ) {
    if (cl.kind != Classification::Kind::standard_circle)
      fail(Errc::target_not_representable, res.report);
    Homography H;
    std::vector<Homography> D = develop(manifold, comp, &H);
    Scalar tau = H.offset();
    Scalar dev_base = manifold.arcs()[comp.arcs[0]].lo.value();
    std::vector<Piece> pieces;
    for (size_t k = 0; k < comp.arcs.size(); ++k) {
      const ManifoldArc& a = manifold.arcs()[comp.arcs[k]];
      Homography h = Homography::affine(tau.inverse(), -dev_base / tau).compose(D[k]);
      pieces.push_back({ProjPoint::finite(frac(a.lo.value())), h});
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& x, const Piece& y) { return compare(x.left, y.left) < 0; });
    res.map = PiecewiseMap::make(Model::circ, std::move(pieces));
    return res;
  }
  if (cl.kind != Classification::Kind::projective_cover || cl.degree != 1)
    fail(Errc::target_not_representable, res.report);
  std::vector<Homography> D = develop(manifold, comp, nullptr);
  std::vector<Piece> pieces;
  for (size_t k = 0; k < comp.arcs.size(); ++k)
    pieces.push_back({manifold.arcs()[comp.arcs[k]].lo, D[k]});
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& x, const Piece& y) { return compare(x.left, y.left) < 0; });
  res.map = PiecewiseMap::make(Model::proj, std::move(pieces));
  return res;
}

bool verify_regularized(const std::vector<PiecewiseMap>& group, const PiecewiseMap& conj) {
  PiecewiseMap inv = conj.inverse();
  for (const PiecewiseMap& g : group)
    if (!conj.compose(g.compose(inv)).is_global()) return false;
  return true;
}

std::string ChartedManifold::str() const {
  std::ostringstream os;
  os << (model_ == Model::circ ? "affine" : "projective") << " manifold: " << arcs_.size()
     << " arc(s), " << gluings_.size() << " gluing(s), " << components_.size()
     << " component(s)\n";
  for (size_t i = 0; i < arcs_.size(); ++i)
    os << "  arc " << i << ": (" << arcs_[i].lo.str() << ", " << arcs_[i].hi.str() << ")\n";
  for (size_t g = 0; g < gluings_.size(); ++g)
    os << "  glue " << g << ": end " << gluings_[g].end_a << " ~ end " << gluings_[g].end_b
       << " via " << gluings_[g].transition.str() << "\n";
  for (size_t c = 0; c < components_.size(); ++c) {
    os << "  component " << c << ":" << (components_[c].cycle ? " circle" : " interval chain")
       << (components_[c].hausdorff ? "" : " [non-Hausdorff]")
       << (components_[c].solved ? "" : " [unsolved transitions]") << " arcs";
    for (int a : components_[c].arcs) os << " " << a;
    os << "\n";
  }
  for (const auto& t : trimmed_) os << "  note: " << t << "\n";
  return os.str();
}

}  // namespace pw1d
