#pragma once

// Finite rackoids: a self-distributive action of the bisections of a
// (semi-)precategory on its arrows, stored as one permutation per bisection.

#include <string>
#include <utility>
#include <vector>

#include "groupoid.hpp"
#include "rack.hpp"

namespace rackworks {

struct RackoidTable {
  FinitePrecategory pc; // unit empty for non-unital rackoids
  std::vector<Bisection> bis;
  Table op; // op[b][γ] = bis[b] ▷ γ

  friend bool operator==(const RackoidTable &, const RackoidTable &) = default;
};

namespace detail {

inline void require_rackoid_shape(const RackoidTable &r) {
  const auto pcReport = validate(r.pc);
  if (!pcReport.valid)
    throw InputError("rackoid: underlying precategory invalid (" +
                     pcReport.violations.front().rule + ")");
  if (r.bis.empty())
    throw InputError("rackoid: no bisections; the axioms would be vacuous");
  if (r.op.size() != r.bis.size())
    throw InputError("rackoid: op needs one row per bisection");
  for (const auto &b : r.bis)
    if (static_cast<int>(b.sec.size()) != r.pc.objects ||
        static_cast<int>(b.underline.size()) != r.pc.objects)
      throw InputError("rackoid: bisection has wrong length");
  for (const auto &row : r.op) {
    if (static_cast<int>(row.size()) != r.pc.arrows)
      throw InputError("rackoid: op row has wrong length");
    for (int v : row)
      if (v < 0 || v >= r.pc.arrows)
        throw InputError("rackoid: op entry out of range");
  }
}

/// Elementwise image of bisection T under op[sigma], as a section; nullopt
/// when the image is not a bisection.
inline std::optional<Bisection> image_bisection(const RackoidTable &r, int sigma,
                                                int tau) {
  std::vector<int> sec(r.pc.objects, -1);
  for (int a : r.bis[tau].sec) {
    const int img = r.op[sigma][a];
    const int m = r.pc.s[img];
    if (sec[m] >= 0)
      return std::nullopt;
    sec[m] = img;
  }
  for (int a : sec)
    if (a < 0)
      return std::nullopt;
  return make_bisection(r.pc, std::move(sec));
}

} // namespace detail

/// Exhaustive rackoid check. Rules and witnesses:
///   "bisection" (b)                 listed entry is not a bisection
///   "compatibility" (b, γ)          s, t of b▷γ are not σ̲(s γ), σ̲(t γ)
///   "bijective" (b, γ1, γ2)         b▷γ1 = b▷γ2
///   "closure" (b, c)                b▷c is not a listed bisection
///   "self-distributive" (b, c, γ)
///   "unit-bisection" ()             units missing from the list (unital)
///   "unit-acts-trivially" (γ)       1_M ▷ γ ≠ γ (unital)
///   "unit-preserved" (b, m)         b ▷ 1_m ≠ 1_{σ̲(m)} (unital)
/// Malformed tables, an invalid precategory and an empty bisection list
/// throw InputError.
inline CheckReport check_rackoid(const RackoidTable &r, bool unital) {
  detail::require_rackoid_shape(r);
  if (unital && !r.pc.unital())
    throw InputError("rackoid: unital check requested on a semi-precategory");
  CheckReport rep;
  const int nb = static_cast<int>(r.bis.size());
  const int na = r.pc.arrows;
  for (int b = 0; b < nb; ++b) {
    const auto checked = make_bisection(r.pc, r.bis[b].sec);
    if (!checked || checked->underline != r.bis[b].underline)
      rep.fail("bisection", {b});
  }
  if (!rep.valid)
    return rep;

  for (int b = 0; b < nb; ++b) {
    const auto &u = r.bis[b].underline;
    std::vector<int> seen(na, -1);
    for (int g = 0; g < na; ++g) {
      const int img = r.op[b][g];
      if (r.pc.s[img] != u[r.pc.s[g]] || r.pc.t[img] != u[r.pc.t[g]])
        rep.fail("compatibility", {b, g});
      if (seen[img] >= 0)
        rep.fail("bijective", {b, seen[img], g});
      else
        seen[img] = g;
    }
  }
  if (rep.has("bijective"))
    return rep;

  std::vector<std::vector<int>> induced(nb, std::vector<int>(nb, -1));
  for (int b = 0; b < nb; ++b)
    for (int c = 0; c < nb; ++c) {
      const auto img = detail::image_bisection(r, b, c);
      const int idx = img ? find_bisection(r.bis, *img) : -1;
      if (idx < 0)
        rep.fail("closure", {b, c});
      induced[b][c] = idx;
    }
  for (int b = 0; b < nb; ++b)
    for (int c = 0; c < nb; ++c) {
      const int bc = induced[b][c];
      if (bc < 0)
        continue;
      for (int g = 0; g < na; ++g)
        if (r.op[b][r.op[c][g]] != r.op[bc][r.op[b][g]]) {
          rep.fail("self-distributive", {b, c, g});
          break;
        }
    }

  if (unital) {
    const auto units = make_bisection(r.pc, r.pc.unit);
    const int ub = units ? find_bisection(r.bis, *units) : -1;
    if (ub < 0) {
      rep.fail("unit-bisection", {});
    } else {
      for (int g = 0; g < na; ++g)
        if (r.op[ub][g] != g) {
          rep.fail("unit-acts-trivially", {g});
          break;
        }
    }
    for (int b = 0; b < nb; ++b)
      for (int m = 0; m < r.pc.objects; ++m)
        if (r.op[b][r.pc.unit[m]] != r.pc.unit[r.bis[b].underline[m]])
          rep.fail("unit-preserved", {b, m});
  }
  return rep;
}

/// Σ ▷ T, the elementwise image. Throws HypothesisError("image-not-bisection")
/// when the table breaks the rackoid invariants.
inline Bisection act_on_bisection(const RackoidTable &r, int sigma, int tau) {
  detail::require_rackoid_shape(r);
  const auto img = detail::image_bisection(r, sigma, tau);
  if (!img)
    throw HypothesisError("image-not-bisection", {sigma, tau});
  return *img;
}

/// The conjugation rackoid: op[Σ][γ] = conjugate(g, Σ, γ).
inline RackoidTable rackoid_from_groupoid(const FiniteGroupoid &g) {
  const auto rep = validate(g);
  if (!rep.valid)
    throw InputError("rackoid_from_groupoid: invalid groupoid (" +
                     rep.violations.front().rule + ")");
  RackoidTable r{g.pc, enumerate_bisections(g), {}};
  if (r.bis.empty())
    throw InputError("rackoid_from_groupoid: groupoid has no bisections");
  r.op.assign(r.bis.size(), std::vector<int>(g.arrows()));
  for (std::size_t b = 0; b < r.bis.size(); ++b)
    for (int x = 0; x < g.arrows(); ++x)
      r.op[b][x] = conjugate(g, r.bis[b], x);
  return r;
}

struct IsotropyRack {
  std::vector<int> arrows; // rack element i is arrow arrows[i]
  FiniteRack rack;
};

/// The rack induced on Γ_m^m: γ' ▷ γ := Σ ▷ γ for any bisection Σ through γ'.
/// Requires a bisection through every isotropy arrow and independence of the
/// choice; otherwise throws HypothesisError ("no-bisection-through" (γ') or
/// "choice-dependent" (γ', Σ1, Σ2, γ)). The rack is pointed at 1_m when the
/// precategory is unital and the pointed axioms hold there.
inline IsotropyRack isotropy_rack(const RackoidTable &r, int m) {
  detail::require_rackoid_shape(r);
  if (m < 0 || m >= r.pc.objects)
    throw InputError("isotropy_rack: object out of range");
  IsotropyRack out;
  for (int a = 0; a < r.pc.arrows; ++a)
    if (r.pc.s[a] == m && r.pc.t[a] == m)
      out.arrows.push_back(a);
  const int n = static_cast<int>(out.arrows.size());
  if (n == 0)
    throw HypothesisError("empty-isotropy", {m});
  std::vector<int> local(r.pc.arrows, -1);
  for (int i = 0; i < n; ++i)
    local[out.arrows[i]] = i;

  out.rack.table.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) {
    const int through = out.arrows[i];
    int first = -1;
    for (int b = 0; b < static_cast<int>(r.bis.size()); ++b) {
      if (r.bis[b].sec[m] != through)
        continue;
      if (first < 0) {
        first = b;
        for (int j = 0; j < n; ++j) {
          const int img = local[r.op[b][out.arrows[j]]];
          if (img < 0)
            throw HypothesisError("image-leaves-isotropy", {through, b, out.arrows[j]});
          out.rack.table[i][j] = img;
        }
        continue;
      }
      for (int j = 0; j < n; ++j)
        if (r.op[b][out.arrows[j]] != r.op[first][out.arrows[j]])
          throw HypothesisError("choice-dependent", {through, first, b, out.arrows[j]});
    }
    if (first < 0)
      throw HypothesisError("no-bisection-through", {through});
  }
  if (r.pc.unital() && local[r.pc.unit[m]] >= 0) {
    const int e = local[r.pc.unit[m]];
    if (check_rack(out.rack.table, e).valid)
      out.rack.base = e;
  }
  return out;
}

struct Restriction {
  RackoidTable rackoid;
  std::vector<int> arrows; // restricted arrow i is ambient arrow arrows[i]
  std::vector<int> objects;
};

/// The non-unital rackoid on {γ : s(γ) ≠ t(γ)}. Its bisections are the
/// ambient bisections restricted elementwise to the objects that remain,
/// kept when every chosen arrow has s ≠ t.
inline Restriction restrict_st_distinct(const RackoidTable &r) {
  detail::require_rackoid_shape(r);
  Restriction out;
  std::vector<int> arrowIdx(r.pc.arrows, -1);
  std::vector<int> objIdx(r.pc.objects, -1);
  for (int a = 0; a < r.pc.arrows; ++a)
    if (r.pc.s[a] != r.pc.t[a]) {
      arrowIdx[a] = static_cast<int>(out.arrows.size());
      out.arrows.push_back(a);
      objIdx[r.pc.s[a]] = 0;
      objIdx[r.pc.t[a]] = 0;
    }
  if (out.arrows.empty())
    throw InputError("restrict_st_distinct: every arrow has s = t");
  for (int m = 0; m < r.pc.objects; ++m)
    if (objIdx[m] >= 0) {
      objIdx[m] = static_cast<int>(out.objects.size());
      out.objects.push_back(m);
    }

  FinitePrecategory &pc = out.rackoid.pc;
  pc.objects = static_cast<int>(out.objects.size());
  pc.arrows = static_cast<int>(out.arrows.size());
  for (int a : out.arrows) {
    pc.s.push_back(objIdx[r.pc.s[a]]);
    pc.t.push_back(objIdx[r.pc.t[a]]);
  }

  std::vector<int> ambientOf;
  for (int b = 0; b < static_cast<int>(r.bis.size()); ++b) {
    std::vector<int> sec;
    bool inside = true;
    for (int m : out.objects) {
      const int a = arrowIdx[r.bis[b].sec[m]];
      if (a < 0) {
        inside = false;
        break;
      }
      sec.push_back(a);
    }
    if (!inside)
      continue;
    auto restricted = make_bisection(pc, sec);
    if (!restricted)
      continue;
    const int existing = find_bisection(out.rackoid.bis, *restricted);
    if (existing >= 0) {
      for (int a : out.arrows)
        if (r.op[b][a] != r.op[ambientOf[existing]][a])
          throw HypothesisError("restriction-ambiguous",
                                {b, ambientOf[existing], a});
      continue;
    }
    out.rackoid.bis.push_back(std::move(*restricted));
    ambientOf.push_back(b);
  }
  if (out.rackoid.bis.empty())
    throw InputError("restrict_st_distinct: no bisection survives the restriction");
  for (int b : ambientOf) {
    std::vector<int> row;
    for (int a : out.arrows) {
      const int img = arrowIdx[r.op[b][a]];
      if (img < 0)
        throw HypothesisError("restriction-not-preserved", {b, a});
      row.push_back(img);
    }
    out.rackoid.op.push_back(std::move(row));
  }
  return out;
}

namespace detail {

/// Σ ⋆ T of two bisections of g, as a bisection.
inline Bisection star_bisections(const FiniteGroupoid &g, const Bisection &a,
                                 const Bisection &b) {
  std::vector<int> sec(g.objects());
  for (int m = 0; m < g.objects(); ++m)
    sec[m] = g.compose(a.sec[m], b.sec[a.underline[m]]);
  auto out = make_bisection(g.pc, std::move(sec));
  if (!out)
    throw std::logic_error("product of bisections is not a bisection");
  return *out;
}

/// Checks the action hypotheses shared by both augmented constructions and
/// returns T ▷ x := p(T)·x over the bisections of X.
inline RackoidTable augmented_table(const FinitePrecategory &X,
                                    const FiniteGroupoid &g,
                                    const std::vector<int> &p,
                                    const Table &action, bool unital) {
  const auto gr = validate(g);
  if (!gr.valid)
    throw InputError("augmented: invalid groupoid (" + gr.violations.front().rule + ")");
  const auto xr = validate(X);
  if (!xr.valid)
    throw InputError("augmented: invalid precategory (" + xr.violations.front().rule + ")");
  if (X.objects != g.objects())
    throw InputError("augmented: X and the groupoid must share the object set");
  if (unital && !X.unital())
    throw InputError("augmented: unital construction needs units on X");
  if (static_cast<int>(p.size()) != X.arrows)
    throw InputError("augmented: p needs one entry per arrow of X");
  for (int v : p)
    if (v < 0 || v >= g.arrows())
      throw InputError("augmented: p entry out of range");

  const auto gbis = enumerate_bisections(g);
  if (gbis.empty())
    throw InputError("augmented: groupoid has no bisections");
  if (action.size() != gbis.size())
    throw InputError("augmented: action needs one row per bisection of the groupoid (" +
                     std::to_string(gbis.size()) + ")");
  for (const auto &row : action) {
    if (static_cast<int>(row.size()) != X.arrows)
      throw InputError("augmented: action row has wrong length");
    for (int v : row)
      if (v < 0 || v >= X.arrows)
        throw InputError("augmented: action entry out of range");
  }

  for (int x = 0; x < X.arrows; ++x) {
    if (g.s(p[x]) != X.s[x])
      throw HypothesisError("intertwine-source", {x});
    if (g.t(p[x]) != X.t[x])
      throw HypothesisError("intertwine-target", {x});
  }
  if (unital)
    for (int m = 0; m < X.objects; ++m)
      if (p[X.unit[m]] != g.unit(m))
        throw HypothesisError("intertwine-unit", {m});

  const int nb = static_cast<int>(gbis.size());
  const int ub = find_bisection(gbis, unit_bisection(g.pc));
  for (int x = 0; x < X.arrows; ++x)
    if (action[ub][x] != x)
      throw HypothesisError("action-identity", {x});
  // Conjugation is a right action for ⋆: (Σ⋆T)·x = T·(Σ·x).
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) {
      const int ab = find_bisection(gbis, star_bisections(g, gbis[a], gbis[b]));
      for (int x = 0; x < X.arrows; ++x)
        if (action[ab][x] != action[b][action[a][x]])
          throw HypothesisError("action-compatibility", {a, b, x});
    }
  for (int a = 0; a < nb; ++a)
    for (int x = 0; x < X.arrows; ++x)
      if (p[action[a][x]] != conjugate(g, gbis[a], p[x]))
        throw HypothesisError("augmentation-identity", {a, x});
  if (unital)
    for (int a = 0; a < nb; ++a)
      for (int m = 0; m < X.objects; ++m)
        if (action[a][X.unit[m]] != X.unit[gbis[a].underline[m]])
          throw HypothesisError("augmentation-identity-units", {a, m});

  RackoidTable r{X, enumerate_bisections(X), {}};
  if (r.bis.empty())
    throw InputError("augmented: X has no bisections");
  for (const auto &T : r.bis) {
    std::vector<int> sec(X.objects);
    for (int m = 0; m < X.objects; ++m)
      sec[m] = p[T.sec[m]];
    const auto pT = make_bisection(g.pc, std::move(sec));
    const int idx = pT ? find_bisection(gbis, *pT) : -1;
    if (idx < 0)
      throw std::logic_error("p-image of a bisection is not a bisection");
    r.op.push_back(action[idx]);
  }
  return r;
}

} // namespace detail

/// Pointed rackoid on X from a morphism p : X → g and an action of Bis(g) on
/// the arrows of X (action[b][x] for bisection b in enumerate_bisections(g)
/// order) satisfying p(Σ·x) = conjugate(g, Σ, p(x)) and Σ·1_m = 1_{σ̲(m)}.
/// T ▷ x := p(T)·x. Each failed hypothesis throws HypothesisError.
inline RackoidTable augmented_rackoid(const FinitePrecategory &X,
                                      const FiniteGroupoid &g,
                                      const std::vector<int> &p,
                                      const Table &action) {
  return detail::augmented_table(X, g, p, action, true);
}

struct FiberProduct {
  RackoidTable rackoid;                  // non-unital, s = t = q(y1)
  std::vector<std::pair<int, int>> pairs; // arrow i is (y1, y2)
  std::vector<int> p;                     // arrow -> isotropy arrow of g
  Table action;                           // bisection of g × arrow
};

/// X = Y ×_M Y for q : Y → M and a groupoid g acting on Y (act[γ][y] defined,
/// i.e. ≥ 0, iff s(γ) = q(y), landing in the fiber over t(γ)). The isotropy
/// group at each m must act freely and transitively on q⁻¹(m). Then
/// p(y1,y2) is the unique γ with γ·y2 = y1, bisections act diagonally and
/// T ▷ x := p(T)·x is a non-unital rackoid.
inline FiberProduct fiber_product_rackoid(const std::vector<int> &q,
                                          const FiniteGroupoid &g,
                                          const Table &act) {
  const auto gr = validate(g);
  if (!gr.valid)
    throw InputError("fiber product: invalid groupoid (" + gr.violations.front().rule + ")");
  const int ny = static_cast<int>(q.size());
  const int k = g.objects();
  std::vector<std::vector<int>> fiber(k);
  for (int y = 0; y < ny; ++y) {
    if (q[y] < 0 || q[y] >= k)
      throw InputError("fiber product: q entry out of range");
    fiber[q[y]].push_back(y);
  }
  for (int m = 0; m < k; ++m)
    if (fiber[m].empty())
      throw InputError("fiber product: q is not surjective");
  if (static_cast<int>(act.size()) != g.arrows())
    throw InputError("fiber product: action needs one row per arrow");
  for (int a = 0; a < g.arrows(); ++a) {
    if (static_cast<int>(act[a].size()) != ny)
      throw InputError("fiber product: action row has wrong length");
    for (int y = 0; y < ny; ++y) {
      const int v = act[a][y];
      if ((v >= 0) != (g.s(a) == q[y]))
        throw InputError("fiber product: action must be defined exactly when s(γ) = q(y)");
      if (v >= ny)
        throw InputError("fiber product: action entry out of range");
      if (v >= 0 && q[v] != g.t(a))
        throw HypothesisError("action-target", {a, y});
    }
  }
  for (int y = 0; y < ny; ++y)
    if (act[g.unit(q[y])][y] != y)
      throw HypothesisError("action-identity", {y});
  for (int a = 0; a < g.arrows(); ++a)
    for (int b = 0; b < g.arrows(); ++b) {
      const int ab = g.compose(a, b);
      if (ab < 0)
        continue;
      for (int y : fiber[g.s(a)])
        if (act[ab][y] != act[b][act[a][y]])
          throw HypothesisError("action-compatibility", {a, b, y});
    }

  FiberProduct out;
  FinitePrecategory &X = out.rackoid.pc;
  X.objects = k;
  for (int m = 0; m < k; ++m)
    for (int y1 : fiber[m])
      for (int y2 : fiber[m]) {
        int found = -1;
        for (int a = 0; a < g.arrows(); ++a) {
          if (g.s(a) != m || g.t(a) != m || act[a][y2] != y1)
            continue;
          if (found >= 0)
            throw HypothesisError("free", {m, y1, y2});
          found = a;
        }
        if (found < 0)
          throw HypothesisError("transitive", {m, y1, y2});
        out.pairs.emplace_back(y1, y2);
        out.p.push_back(found);
      }
  std::sort(out.pairs.begin(), out.pairs.end());
  {
    // Recompute p in the sorted order.
    std::vector<int> p;
    for (const auto &[y1, y2] : out.pairs)
      for (int a = 0; a < g.arrows(); ++a)
        if (g.s(a) == q[y1] && g.t(a) == q[y1] && act[a][y2] == y1) {
          p.push_back(a);
          break;
        }
    out.p = std::move(p);
  }
  X.arrows = static_cast<int>(out.pairs.size());
  for (const auto &[y1, y2] : out.pairs) {
    X.s.push_back(q[y1]);
    X.t.push_back(q[y1]);
  }

  const auto gbis = enumerate_bisections(g);
  for (const auto &B : gbis) {
    std::vector<int> row;
    for (const auto &[y1, y2] : out.pairs) {
      const int a = B.sec[q[y1]];
      const std::pair<int, int> img{act[a][y1], act[a][y2]};
      const auto it = std::lower_bound(out.pairs.begin(), out.pairs.end(), img);
      row.push_back(static_cast<int>(it - out.pairs.begin()));
    }
    out.action.push_back(std::move(row));
  }
  out.rackoid = detail::augmented_table(X, g, out.p, out.action, false);
  return out;
}

} // namespace rackworks
