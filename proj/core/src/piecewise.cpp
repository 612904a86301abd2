#include "pw1d/piecewise.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pw1d {

namespace {

Scalar frac(const Scalar& x) { return x - Scalar(x.floor()); }

Scalar eval_affine(const Homography& e, const Scalar& x) { return e.slope() * x + e.offset(); }

Homography shift_offset(const Homography& e, long delta) {
  return Homography::affine(e.slope(), e.offset() + Scalar(delta));
}

// Lift segment of a circ map: domain [lo, hi) inside [0,1).
struct Seg {
  Scalar lo, hi;
  Homography e;
};

// Half-open circular arc [l, r); l == r encodes the full circle.
bool in_half_open_arc(const ProjPoint& l, const ProjPoint& r, const ProjPoint& x) {
  if (x == l) return true;
  if (l == r) return true;
  if (x == r) return false;
  return circular_order(l, x, r);
}

bool in_open_arc(const ProjPoint& l, const ProjPoint& r, const ProjPoint& x) {
  if (x == l) return false;
  if (l == r) return true;
  if (x == r) return false;
  return circular_order(l, x, r);
}

// Verifies the cyclic list of endpoints is strictly increasing in circular
// order (one winding); returns the rotation offset of the minimum.
size_t check_circular(const std::vector<Piece>& pieces) {
  size_t n = pieces.size();
  size_t m = 0;
  for (size_t i = 1; i < n; ++i)
    if (compare(pieces[i].left, pieces[m].left) < 0) m = i;
  for (size_t i = 0; i + 1 < n; ++i) {
    const ProjPoint& u = pieces[(m + i) % n].left;
    const ProjPoint& v = pieces[(m + i + 1) % n].left;
    if (!(compare(u, v) < 0))
      fail(Errc::not_circularly_ordered, "piece endpoints are not circularly ordered");
  }
  return m;
}

void sort_pieces_circular(std::vector<Piece>& pieces) {
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return compare(a.left, b.left) < 0; });
  for (size_t i = 0; i + 1 < pieces.size(); ++i)
    if (pieces[i].left == pieces[i + 1].left)
      fail(Errc::not_circularly_ordered, "duplicate piece endpoint");
}

std::vector<Seg> circ_segments(const std::vector<Piece>& pieces) {
  // Cut the cyclic piece list at 0 and reduce every expression so its image
  // lies in [0,1] (splitting where the lift crosses an integer).
  size_t n = pieces.size();
  std::vector<Seg> raw;
  for (size_t i = 0; i < n; ++i) {
    Scalar a = pieces[i].left.value();
    const Homography& e = pieces[i].map;
    if (i + 1 < n) {
      raw.push_back({a, pieces[i + 1].left.value(), e});
    } else {
      // last piece wraps around through 1 == 0
      Scalar b = pieces[0].left.value();
      raw.push_back({a, Scalar(1), e});
      if (!b.is_zero()) raw.push_back({Scalar(0), b, e.compose(Homography::affine(1, 1))});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const Seg& x, const Seg& y) { return x.lo < y.lo; });

  std::vector<Seg> out;
  for (Seg s : raw) {
    Scalar p = s.e.slope();
    Scalar v = eval_affine(s.e, s.lo);
    mpz_class shift;
    if (p.sign() > 0) {
      shift = v.floor();  // left value into [0,1)
    } else {
      shift = (-(-v).floor()) - 1;  // left value into (0,1]
    }
    if (shift != 0)
      s.e = Homography::affine(p, s.e.offset() - Scalar(shift));
    while (true) {
      Scalar w = eval_affine(s.e, s.hi);
      if (p.sign() > 0) {
        if (w <= Scalar(1)) {
          out.push_back(s);
          break;
        }
        Scalar x = (Scalar(1) - s.e.offset()) / p;
        out.push_back({s.lo, x, s.e});
        s.lo = x;
        s.e = shift_offset(s.e, -1);
      } else {
        if (w >= Scalar(0)) {
          out.push_back(s);
          break;
        }
        Scalar x = (Scalar(0) - s.e.offset()) / p;
        out.push_back({s.lo, x, s.e});
        s.lo = x;
        s.e = shift_offset(s.e, 1);
      }
    }
  }
  return out;
}

void validate_circ(const std::vector<Seg>& segs) {
  struct Img {
    Scalar lo, hi;
  };
  std::vector<Img> imgs;
  std::vector<Scalar> ends;
  for (const Seg& s : segs) {
    Scalar u = eval_affine(s.e, s.lo), v = eval_affine(s.e, s.hi);
    if (v < u) std::swap(u, v);
    imgs.push_back({u, v});
    ends.push_back(u);
    ends.push_back(v);
  }
  ends.push_back(Scalar(0));
  ends.push_back(Scalar(1));
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  std::vector<int> count(ends.size() - 1, 0);
  for (const Img& im : imgs)
    for (size_t j = 0; j + 1 < ends.size(); ++j)
      if (im.lo <= ends[j] && ends[j + 1] <= im.hi) ++count[j];
  for (int c : count)
    if (c > 1) fail(Errc::not_injective, "image arcs overlap");
  for (int c : count)
    if (c == 0) fail(Errc::not_surjective, "image misses an open arc");
}

void validate_proj(const std::vector<Piece>& pieces) {
  size_t n = pieces.size();
  if (n <= 1) return;  // a single homographic piece is a bijection of P^1
  std::vector<std::pair<ProjPoint, ProjPoint>> arcs;  // open image arcs
  for (size_t i = 0; i < n; ++i) {
    const ProjPoint& l = pieces[i].left;
    const ProjPoint& r = pieces[(i + 1) % n].left;
    ProjPoint u = pieces[i].map.apply(l);
    ProjPoint v = pieces[i].map.apply(r);
    if (pieces[i].map.orientation() < 0) std::swap(u, v);
    arcs.emplace_back(u, v);
  }
  std::vector<ProjPoint> ends;
  for (auto& a : arcs) {
    ends.push_back(a.first);
    ends.push_back(a.second);
  }
  std::sort(ends.begin(), ends.end(),
            [](const ProjPoint& a, const ProjPoint& b) { return compare(a, b) < 0; });
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  size_t M = ends.size();
  auto index_of = [&](const ProjPoint& p) {
    for (size_t k = 0; k < M; ++k)
      if (ends[k] == p) return k;
    fail(Errc::bad_input, "internal: endpoint not found");
  };
  std::vector<int> count(M, 0);  // atom k = open arc (ends[k], ends[k+1 mod M])
  for (auto& a : arcs) {
    size_t ia = index_of(a.first), ib = index_of(a.second);
    for (size_t k = ia; k != ib; k = (k + 1) % M) ++count[k];
  }
  for (int c : count)
    if (c > 1) fail(Errc::not_injective, "image arcs overlap");
  for (int c : count)
    if (c == 0) fail(Errc::not_surjective, "image misses an open arc");
}

}  // namespace

PiecewiseMap PiecewiseMap::build(Model model, std::vector<Piece> pieces, bool allow_unsorted) {
  if (pieces.empty()) fail(Errc::bad_input, "a piecewise map needs at least one piece");
  if (model == Model::circ) {
    for (const Piece& p : pieces) {
      if (!p.map.is_affine())
        fail(Errc::non_affine_piece_in_circ_model, "circ pieces must be affine");
      if (p.left.is_infinity() || p.left.value() < Scalar(0) || p.left.value() >= Scalar(1))
        fail(Errc::not_circularly_ordered, "circ endpoints must lie in [0,1)");
    }
    if (allow_unsorted) {
      sort_pieces_circular(pieces);
    } else {
      size_t m = check_circular(pieces);
      std::rotate(pieces.begin(), pieces.begin() + m, pieces.end());
    }
    std::vector<Seg> segs = circ_segments(pieces);
    validate_circ(segs);
    // merge adjacent equal expressions (the cut at 0 is a chart convention
    // and is never merged across)
    std::vector<Seg> merged;
    for (const Seg& s : segs) {
      if (!merged.empty() && merged.back().e == s.e && merged.back().hi == s.lo)
        merged.back().hi = s.hi;
      else
        merged.push_back(s);
    }
    std::vector<Piece> out;
    for (const Seg& s : merged) out.push_back({ProjPoint::finite(s.lo), s.e});
    return PiecewiseMap(model, std::move(out));
  }
  // proj
  if (allow_unsorted) {
    if (pieces.size() > 1) sort_pieces_circular(pieces);
  } else {
    size_t m = check_circular(pieces);
    std::rotate(pieces.begin(), pieces.begin() + m, pieces.end());
  }
  validate_proj(pieces);
  // full cyclic merge
  std::vector<Piece> merged;
  for (const Piece& p : pieces) {
    if (!merged.empty() && merged.back().map == p.map) continue;
    merged.push_back(p);
  }
  while (merged.size() >= 2 && merged.front().map == merged.back().map)
    merged.erase(merged.begin());
  if (merged.size() == 1) merged[0].left = ProjPoint::infinity();
  return PiecewiseMap(model, std::move(merged));
}

PiecewiseMap PiecewiseMap::make(Model model, std::vector<Piece> pieces) {
  return build(model, std::move(pieces), false);
}

PiecewiseMap PiecewiseMap::identity(Model model) {
  if (model == Model::circ)
    return build(Model::circ, {{ProjPoint::finite(Scalar(0)), Homography()}}, true);
  return build(Model::proj, {{ProjPoint::infinity(), Homography()}}, true);
}

PiecewiseMap PiecewiseMap::rotation(const Scalar& amount) {
  return build(Model::circ,
               {{ProjPoint::finite(Scalar(0)), Homography::affine(1, frac(amount))}}, true);
}

bool operator==(const PiecewiseMap& f, const PiecewiseMap& g) {
  if (f.model_ != g.model_ || f.pieces_.size() != g.pieces_.size()) return false;
  for (size_t i = 0; i < f.pieces_.size(); ++i)
    if (f.pieces_[i].left != g.pieces_[i].left || f.pieces_[i].map != g.pieces_[i].map)
      return false;
  return true;
}

int compare(const PiecewiseMap& f, const PiecewiseMap& g) {
  if (f.model() != g.model()) return f.model() == Model::circ ? -1 : 1;
  if (f.piece_count() != g.piece_count()) return f.piece_count() < g.piece_count() ? -1 : 1;
  for (size_t i = 0; i < f.piece_count(); ++i) {
    if (int c = compare(f.pieces()[i].left, g.pieces()[i].left)) return c;
    if (int c = compare(f.pieces()[i].map, g.pieces()[i].map)) return c;
  }
  return 0;
}

size_t PiecewiseMap::piece_index_at(const ProjPoint& x) const {
  size_t n = pieces_.size();
  if (n == 1) return 0;
  if (model_ == Model::circ) {
    Scalar v = frac(x.value());
    size_t best = 0;
    for (size_t i = 0; i < n; ++i)
      if (pieces_[i].left.value() <= v) best = i;
    return best;
  }
  for (size_t i = 0; i < n; ++i)
    if (in_half_open_arc(pieces_[i].left, pieces_[(i + 1) % n].left, x)) return i;
  fail(Errc::bad_input, "internal: point not located");
}

bool PiecewiseMap::continuous_at(size_t i) const {
  size_t n = pieces_.size();
  size_t j = (i + n - 1) % n;
  if (model_ == Model::circ) {
    Scalar b = pieces_[i].left.value();
    Scalar lift = b.is_zero() ? Scalar(1) : b;
    Scalar leftv = frac(eval_affine(pieces_[j].map, lift));
    Scalar rightv = frac(eval_affine(pieces_[i].map, b));
    return leftv == rightv;
  }
  const ProjPoint& b = pieces_[i].left;
  return pieces_[j].map.apply(b) == pieces_[i].map.apply(b);
}

bool PiecewiseMap::germ_equal_at(size_t i) const {
  size_t n = pieces_.size();
  size_t j = (i + n - 1) % n;
  if (model_ == Model::circ) {
    if (pieces_[j].map.slope() != pieces_[i].map.slope()) return false;
    Scalar b = pieces_[i].left.value();
    Scalar lift = b.is_zero() ? Scalar(1) : b;
    Scalar delta = eval_affine(pieces_[j].map, lift) - eval_affine(pieces_[i].map, b);
    return delta.is_integer();
  }
  return pieces_[j].map == pieces_[i].map;
}

PiecewiseMap::Eval PiecewiseMap::apply_at(const ProjPoint& x) const {
  if (model_ == Model::circ && x.is_infinity())
    fail(Errc::model_mismatch, "infinity is not a point of R/Z");
  if (model_ == Model::circ) {
    Scalar v = frac(x.value());
    size_t i = piece_index_at(ProjPoint::finite(v));
    Scalar y = frac(eval_affine(pieces_[i].map, v));
    bool dep = (pieces_[i].left.value() == v) && pieces_.size() >= 1 && !continuous_at(i);
    return {ProjPoint::finite(y), dep};
  }
  size_t i = piece_index_at(x);
  bool dep = (pieces_.size() > 1) && (pieces_[i].left == x) && !continuous_at(i);
  return {pieces_[i].map.apply(x), dep};
}

std::vector<ProjPoint> PiecewiseMap::breakpoints() const {
  std::vector<ProjPoint> out;
  if (pieces_.size() <= 1) return out;
  for (const Piece& p : pieces_) out.push_back(p.left);
  return out;
}

bool PiecewiseMap::is_continuous() const {
  size_t n = pieces_.size();
  if (model_ == Model::proj && n == 1) return true;
  for (size_t i = 0; i < n; ++i)
    if (!continuous_at(i)) return false;
  return true;
}

bool PiecewiseMap::is_C1() const {
  if (!is_continuous()) return false;
  size_t n = pieces_.size();
  if (model_ == Model::circ) {
    for (size_t i = 1; i < n; ++i)
      if (pieces_[i].map.slope() != pieces_[0].map.slope()) return false;
    return true;
  }
  if (n == 1) return true;
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + n - 1) % n;
    Homography h = pieces_[j].map.inverse().compose(pieces_[i].map);
    if (h.derivative_chart(pieces_[i].left) != Scalar(1)) return false;
  }
  return true;
}

bool PiecewiseMap::is_global() const {
  if (model_ == Model::proj) return pieces_.size() == 1;
  if (!is_continuous()) return false;
  for (size_t i = 1; i < pieces_.size(); ++i)
    if (pieces_[i].map.slope() != pieces_[0].map.slope()) return false;
  return true;
}

bool PiecewiseMap::is_IET() const {
  if (model_ != Model::circ) return false;
  for (const Piece& p : pieces_)
    if (p.map.slope() != Scalar(1)) return false;
  return true;
}

bool PiecewiseMap::is_piecewise_affine() const {
  if (model_ == Model::circ) return true;
  // true iff the map fixes the complement of [0,1] pointwise (mod finite)
  // and is affine inside it
  size_t n = pieces_.size();
  for (size_t i = 0; i < n; ++i) {
    const ProjPoint& l = pieces_[i].left;
    const ProjPoint& r = pieces_[(i + 1) % n].left;
    bool inside = !l.is_infinity() && !r.is_infinity() && n > 1 &&
                  Scalar(0) <= l.value() && l.value() < r.value() && r.value() <= Scalar(1);
    if (inside) {
      if (!pieces_[i].map.is_affine()) return false;
    } else {
      if (!pieces_[i].map.is_identity()) return false;
    }
  }
  return true;
}

PiecewiseMap::Order PiecewiseMap::order_of(unsigned long bound) const {
  if (bound < 1) fail(Errc::bad_input, "order bound must be >= 1");
  PiecewiseMap id = identity(model_);
  PiecewiseMap g = *this;
  for (unsigned long k = 1; k <= bound; ++k) {
    if (g == id) return {true, k, bound};
    g = compose(g);
  }
  return {false, 0, bound};
}

PiecewiseMap PiecewiseMap::compose(const PiecewiseMap& g) const {
  if (model_ != g.model_) fail(Errc::model_mismatch, "composing maps of different models");
  const PiecewiseMap& f = *this;
  if (model_ == Model::circ) {
    std::vector<Scalar> cuts;
    for (const Piece& p : g.pieces_) cuts.push_back(p.left.value());
    size_t gn = g.pieces_.size();
    for (size_t i = 0; i < gn; ++i) {
      Scalar a = g.pieces_[i].left.value();
      Scalar b = (i + 1 < gn) ? g.pieces_[i + 1].left.value() : Scalar(1);
      const Homography& m = g.pieces_[i].map;
      Scalar p = m.slope(), q = m.offset();
      for (const Piece& fp : f.pieces_) {
        Scalar e = fp.left.value();
        for (int t = 0; t < 2; ++t) {
          if (t == 1 && !e.is_zero()) continue;
          Scalar target = (t == 0) ? e : Scalar(1);
          Scalar x = (target - q) / p;
          if (a < x && x < b) cuts.push_back(x);
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Piece> raw;
    for (size_t j = 0; j < cuts.size(); ++j) {
      Scalar c = cuts[j];
      Scalar cn = (j + 1 < cuts.size()) ? cuts[j + 1] : Scalar(1);
      const Homography& m = g.pieces_[g.piece_index_at(ProjPoint::finite(c))].map;
      Scalar u = eval_affine(m, c), v = eval_affine(m, cn);
      if (v < u) std::swap(u, v);
      // f's piece whose lift interval contains the open image (u, v)
      size_t fi = 0;
      for (size_t i = 0; i < f.pieces_.size(); ++i)
        if (f.pieces_[i].left.value() <= u) fi = i;
      raw.push_back({ProjPoint::finite(c), f.pieces_[fi].map.compose(m)});
    }
    return build(Model::circ, std::move(raw), true);
  }
  // proj
  std::vector<ProjPoint> cuts;
  size_t gn = g.pieces_.size();
  for (const Piece& p : g.pieces_) cuts.push_back(p.left);
  for (size_t i = 0; i < gn; ++i) {
    const ProjPoint& l = g.pieces_[i].left;
    const ProjPoint& r = g.pieces_[(i + 1) % gn].left;
    Homography minv = g.pieces_[i].map.inverse();
    for (const Piece& fp : f.pieces_) {
      ProjPoint x = minv.apply(fp.left);
      if (in_open_arc(l, r, x)) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end(),
            [](const ProjPoint& a, const ProjPoint& b) { return compare(a, b) < 0; });
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Piece> raw;
  size_t N = cuts.size();
  for (size_t j = 0; j < N; ++j) {
    const ProjPoint& c = cuts[j];
    const ProjPoint& cn = cuts[(j + 1) % N];
    const Homography& m = g.pieces_[g.piece_index_at(c)].map;
    ProjPoint alpha = (m.orientation() > 0 || N == 1) ? m.apply(c) : m.apply(cn);
    size_t fi = f.piece_index_at(alpha);
    raw.push_back({c, f.pieces_[fi].map.compose(m)});
  }
  return build(Model::proj, std::move(raw), true);
}

PiecewiseMap PiecewiseMap::inverse() const {
  size_t n = pieces_.size();
  std::vector<Piece> raw;
  if (model_ == Model::circ) {
    for (size_t i = 0; i < n; ++i) {
      Scalar a = pieces_[i].left.value();
      Scalar b = (i + 1 < n) ? pieces_[i + 1].left.value() : Scalar(1);
      const Homography& e = pieces_[i].map;
      Scalar L = (e.slope().sign() > 0) ? eval_affine(e, a) : eval_affine(e, b);
      raw.push_back({ProjPoint::finite(frac(L)), e.inverse()});
    }
    return build(Model::circ, std::move(raw), true);
  }
  for (size_t i = 0; i < n; ++i) {
    const ProjPoint& l = pieces_[i].left;
    const ProjPoint& r = pieces_[(i + 1) % n].left;
    const Homography& m = pieces_[i].map;
    ProjPoint L = (m.orientation() > 0 || n == 1) ? m.apply(l) : m.apply(r);
    raw.push_back({L, m.inverse()});
  }
  return build(Model::proj, std::move(raw), true);
}

PiecewiseMap PiecewiseMap::convert_model() const {
  if (model_ == Model::circ) {
    std::vector<Piece> raw;
    for (const Piece& p : pieces_) raw.push_back(p);
    raw.push_back({ProjPoint::finite(Scalar(1)), Homography()});
    return build(Model::proj, std::move(raw), true);
  }
  // proj -> circ: the map must fix P^1 minus [0,1] pointwise mod finite
  size_t n = pieces_.size();
  for (size_t i = 0; i < n; ++i) {
    const ProjPoint& l = pieces_[i].left;
    const ProjPoint& r = pieces_[(i + 1) % n].left;
    bool inside = n > 1 && !l.is_infinity() && !r.is_infinity() && Scalar(0) <= l.value() &&
                  l.value() < r.value() && r.value() <= Scalar(1);
    if (!inside && !pieces_[i].map.is_identity())
      fail(Errc::not_supported_on_complement, "map moves points outside [0,1]");
    if (inside && !pieces_[i].map.is_affine())
      fail(Errc::non_affine_piece_in_circ_model, "non-affine piece inside [0,1]");
  }
  std::vector<Scalar> cuts;
  cuts.push_back(Scalar(0));
  for (const Piece& p : pieces_)
    if (!p.left.is_infinity() && Scalar(0) <= p.left.value() && p.left.value() < Scalar(1))
      cuts.push_back(p.left.value());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Piece> raw;
  for (const Scalar& c : cuts) {
    size_t i = piece_index_at(ProjPoint::finite(c));
    raw.push_back({ProjPoint::finite(c), pieces_[i].map});
  }
  return build(Model::circ, std::move(raw), true);
}

std::optional<ProjPoint> PiecewiseMap::partial_eval(const ProjPoint& x) const {
  if (model_ == Model::circ && x.is_infinity()) return std::nullopt;
  if (pieces_.size() > 1) {
    ProjPoint key = (model_ == Model::circ) ? ProjPoint::finite(frac(x.value())) : x;
    for (const Piece& p : pieces_)
      if (p.left == key) return std::nullopt;
  }
  return apply_at(x).value;
}

std::optional<ProjPoint> PiecewiseMap::partial_eval_inverse(const ProjPoint& y) const {
  size_t n = pieces_.size();
  if (model_ == Model::circ) {
    if (y.is_infinity()) return std::nullopt;
    Scalar yv = frac(y.value());
    for (size_t i = 0; i < n; ++i) {
      Scalar a = pieces_[i].left.value();
      Scalar b = (i + 1 < n) ? pieces_[i + 1].left.value() : Scalar(1);
      const Homography& e = pieces_[i].map;
      for (int t = 0; t < 2; ++t) {
        if (t == 1 && !yv.is_zero()) continue;
        Scalar target = (t == 0) ? yv : Scalar(1);
        Scalar x = (target - e.offset()) / e.slope();
        if (n == 1) {
          if (a <= x && x < b) return ProjPoint::finite(x);
        } else if (a < x && x < b) {
          return ProjPoint::finite(x);
        }
      }
    }
    return std::nullopt;
  }
  for (size_t i = 0; i < n; ++i) {
    ProjPoint x = pieces_[i].map.inverse().apply(y);
    if (n == 1) return x;
    if (in_open_arc(pieces_[i].left, pieces_[(i + 1) % n].left, x)) return x;
  }
  return std::nullopt;
}

std::string PiecewiseMap::str() const {
  std::ostringstream os;
  os << (model_ == Model::circ ? "circ{" : "proj{");
  for (const Piece& p : pieces_) {
    os << " [" << p.left.str() << ": ";
    if (model_ == Model::circ)
      os << p.map.slope().str() << "," << p.map.offset().str();
    else
      os << p.map.a().str() << "," << p.map.b().str() << ";" << p.map.c().str() << ","
         << p.map.d().str();
    os << "]";
  }
  os << " }";
  return os.str();
}

}  // namespace pw1d
