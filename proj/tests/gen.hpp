#ifndef PW1D_TESTS_GEN_HPP
#define PW1D_TESTS_GEN_HPP

// Deterministic random generators for the test corpora. All maps produced
// here are valid by construction: IETs from cut permutations, continuous PL
// homeomorphisms from matched cut sequences, optionally reflected, and
// projective maps obtained by embedding and conjugating.

#include <numeric>
#include <random>
#include <vector>

#include "pw1d/piecewise.hpp"

namespace gen {

using namespace pw1d;

inline Scalar grid_point(std::mt19937_64& rng, long den) {
  std::uniform_int_distribution<long> d(0, den - 1);
  return Scalar(d(rng), den);
}

// Distinct cuts 0 = c_0 < c_1 < ... < c_{k-1} < 1 on the 1/den grid.
inline std::vector<Scalar> random_cuts(std::mt19937_64& rng, int k, long den) {
  std::vector<long> picks{0};
  std::uniform_int_distribution<long> d(1, den - 1);
  while (static_cast<int>(picks.size()) < k) {
    long v = d(rng);
    bool dup = false;
    for (long p : picks) dup |= (p == v);
    if (!dup) picks.push_back(v);
  }
  std::sort(picks.begin(), picks.end());
  std::vector<Scalar> out;
  for (long p : picks) out.push_back(Scalar(p, den));
  return out;
}

inline PiecewiseMap random_iet(std::mt19937_64& rng, int max_pieces = 6, long den = 24) {
  std::uniform_int_distribution<int> kd(1, max_pieces);
  int k = kd(rng);
  std::vector<Scalar> cuts = random_cuts(rng, k, den);
  cuts.push_back(Scalar(1));
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  // target left endpoints: lengths rearranged by perm
  std::vector<Scalar> target(k), len(k);
  for (int i = 0; i < k; ++i) len[i] = cuts[i + 1] - cuts[i];
  Scalar acc(0);
  std::vector<Scalar> slot(k);
  for (int j = 0; j < k; ++j) {  // slot j in target order holds piece perm[j]
    slot[perm[j]] = acc;
    acc += len[perm[j]];
  }
  std::vector<Piece> pieces;
  for (int i = 0; i < k; ++i)
    pieces.push_back({ProjPoint::finite(cuts[i]), Homography::affine(1, slot[i] - cuts[i])});
  return PiecewiseMap::make(Model::circ, pieces);
}

// Orientation-preserving continuous PL homeomorphism with slopes in
// [1/5, 5]: matched cut sequences plus a grid rotation offset.
inline PiecewiseMap random_pl(std::mt19937_64& rng, int max_pieces = 5, long den = 24) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::uniform_int_distribution<int> kd(1, max_pieces);
    int k = kd(rng);
    std::vector<Scalar> a = random_cuts(rng, k, den), b = random_cuts(rng, k, den);
    a.push_back(Scalar(1));
    b.push_back(Scalar(1));
    Scalar off = grid_point(rng, den);
    std::vector<Piece> pieces;
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      Scalar p = (b[i + 1] - b[i]) / (a[i + 1] - a[i]);
      if (p > Scalar(5) || p < Scalar(1, 5)) {
        ok = false;
        break;
      }
      Scalar q = b[i] + off - p * a[i];
      pieces.push_back({ProjPoint::finite(a[i]), Homography::affine(p, q)});
    }
    if (!ok) continue;
    return PiecewiseMap::make(Model::circ, pieces);
  }
  return PiecewiseMap::identity(Model::circ);
}

inline PiecewiseMap circ_reflection() {
  return PiecewiseMap::make(Model::circ,
                            {{ProjPoint::finite(Scalar(0)), Homography::affine(-1, 1)}});
}

inline PiecewiseMap random_circ(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  switch (pick(rng)) {
    case 0: return random_iet(rng);
    case 1: return random_pl(rng);
    case 2: return circ_reflection().compose(random_iet(rng));
    default: return random_pl(rng).compose(circ_reflection());
  }
}

inline Homography random_homography(std::mt19937_64& rng, long bound = 2) {
  std::uniform_int_distribution<long> d(-bound, bound);
  while (true) {
    Scalar a(d(rng)), b(d(rng)), c(d(rng)), e(d(rng));
    if ((a * e - b * c).is_zero()) continue;
    return Homography(a, b, c, e);
  }
}

inline bool entries_small(const PiecewiseMap& f, long bound = 5) {
  for (const Piece& p : f.pieces()) {
    // compare against the leading-one normalization so the check is about
    // entry values, not the integral canonical form
    const Homography& h = p.map;
    Scalar lead;
    for (const Scalar* s : {&h.a(), &h.b(), &h.c(), &h.d()})
      if (!s->is_zero()) {
        lead = *s;
        break;
      }
    for (const Scalar* s : {&h.a(), &h.b(), &h.c(), &h.d()}) {
      Scalar v = *s / lead;
      if (v > Scalar(bound) || v < Scalar(-bound)) return false;
    }
  }
  return true;
}

inline PiecewiseMap random_proj(std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    PiecewiseMap base = random_circ(rng).convert_model();
    Homography g = random_homography(rng);
    PiecewiseMap gm = PiecewiseMap::make(Model::proj, {{ProjPoint::infinity(), g}});
    PiecewiseMap out = gm.compose(base.compose(gm.inverse()));
    if (entries_small(out) && out.piece_count() <= 6) return out;
  }
  return PiecewiseMap::identity(Model::proj);
}

inline PiecewiseMap random_map(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2);
  return pick(rng) == 2 ? random_proj(rng) : random_circ(rng);
}

// Random non-breakpoint sample point of the circle for a set of maps.
inline ProjPoint random_sample_point(std::mt19937_64& rng, const std::vector<PiecewiseMap>& maps) {
  while (true) {
    Scalar x = grid_point(rng, 977);  // prime grid misses the den<=24 breakpoints
    ProjPoint p = ProjPoint::finite(x);
    bool clash = false;
    for (const auto& m : maps)
      for (const auto& b : m.breakpoints())
        if (b == p) clash = true;
    if (!clash) return p;
  }
}

}  // namespace gen

#endif
