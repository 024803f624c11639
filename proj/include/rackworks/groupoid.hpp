#pragma once

// Finite precategories and groupoids, their bisections and conjugation.
//
// Composition is read left to right: comp(x, y) is defined iff t(x) = s(y),
// and has source s(x), target t(y).

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "rack.hpp"

namespace rackworks {

using ArrowSet = std::set<int>;

/// Arrows 0..arrows-1 over objects 0..objects-1. An empty unit array makes
/// this a semi-precategory.
struct FinitePrecategory {
  int objects = 0;
  int arrows = 0;
  std::vector<int> s;
  std::vector<int> t;
  std::vector<int> unit;

  bool unital() const { return !unit.empty(); }

  friend bool operator==(const FinitePrecategory &, const FinitePrecategory &) = default;
};

struct FiniteGroupoid {
  FinitePrecategory pc;
  Table comp; // arrows × arrows, -1 where not composable
  std::vector<int> inv;

  int objects() const { return pc.objects; }
  int arrows() const { return pc.arrows; }
  int s(int x) const { return pc.s[x]; }
  int t(int x) const { return pc.t[x]; }
  int unit(int m) const { return pc.unit[m]; }
  int compose(int x, int y) const { return comp[x][y]; }

  friend bool operator==(const FiniteGroupoid &, const FiniteGroupoid &) = default;
};

/// A section of the source map whose target composite is a bijection.
struct Bisection {
  std::vector<int> sec;       // object -> arrow, s(sec[m]) = m
  std::vector<int> underline; // object -> object, t(sec[m])

  ArrowSet arrows() const { return ArrowSet(sec.begin(), sec.end()); }

  friend bool operator==(const Bisection &, const Bisection &) = default;
};

namespace detail {

inline void require_shape(const FinitePrecategory &pc) {
  if (pc.objects <= 0 || pc.arrows <= 0)
    throw InputError("precategory: needs at least one object and one arrow");
  if (static_cast<int>(pc.s.size()) != pc.arrows ||
      static_cast<int>(pc.t.size()) != pc.arrows)
    throw InputError("precategory: s and t must have one entry per arrow");
  for (int x = 0; x < pc.arrows; ++x)
    if (pc.s[x] < 0 || pc.s[x] >= pc.objects || pc.t[x] < 0 ||
        pc.t[x] >= pc.objects)
      throw InputError("precategory: s/t of arrow " + std::to_string(x) +
                       " out of range");
  if (pc.unital()) {
    if (static_cast<int>(pc.unit.size()) != pc.objects)
      throw InputError("precategory: unit must have one entry per object");
    for (int u : pc.unit)
      if (u < 0 || u >= pc.arrows)
        throw InputError("precategory: unit arrow out of range");
  }
}

inline void require_shape(const FiniteGroupoid &g) {
  require_shape(g.pc);
  if (!g.pc.unital())
    throw InputError("groupoid: unit array required");
  const int n = g.arrows();
  if (static_cast<int>(g.comp.size()) != n)
    throw InputError("groupoid: comp must be arrows × arrows");
  for (const auto &row : g.comp) {
    if (static_cast<int>(row.size()) != n)
      throw InputError("groupoid: comp must be arrows × arrows");
    for (int v : row)
      if (v < -1 || v >= n)
        throw InputError("groupoid: comp entry out of range");
  }
  if (static_cast<int>(g.inv.size()) != n)
    throw InputError("groupoid: inv must have one entry per arrow");
  for (int v : g.inv)
    if (v < 0 || v >= n)
      throw InputError("groupoid: inv entry out of range");
}

} // namespace detail

/// Rules: "s-surjective"/"t-surjective" (m), "unit-source"/"unit-target" (m).
inline CheckReport validate(const FinitePrecategory &pc) {
  detail::require_shape(pc);
  CheckReport r;
  std::vector<bool> hitS(pc.objects, false), hitT(pc.objects, false);
  for (int x = 0; x < pc.arrows; ++x) {
    hitS[pc.s[x]] = true;
    hitT[pc.t[x]] = true;
  }
  for (int m = 0; m < pc.objects; ++m) {
    if (!hitS[m])
      r.fail("s-surjective", {m});
    if (!hitT[m])
      r.fail("t-surjective", {m});
  }
  if (pc.unital())
    for (int m = 0; m < pc.objects; ++m) {
      if (pc.s[pc.unit[m]] != m)
        r.fail("unit-source", {m});
      if (pc.t[pc.unit[m]] != m)
        r.fail("unit-target", {m});
    }
  return r;
}

/// Precategory rules plus "comp-domain", "comp-source", "comp-target" (x,y),
/// "associativity" (x,y,z), "left-unit"/"right-unit" (x),
/// "left-inverse"/"right-inverse" (x).
inline CheckReport validate(const FiniteGroupoid &g) {
  detail::require_shape(g);
  CheckReport r = validate(g.pc);
  const int n = g.arrows();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const bool composable = g.t(x) == g.s(y);
      const int z = g.compose(x, y);
      if (composable != (z >= 0)) {
        r.fail("comp-domain", {x, y});
        continue;
      }
      if (z < 0)
        continue;
      if (g.s(z) != g.s(x))
        r.fail("comp-source", {x, y});
      if (g.t(z) != g.t(y))
        r.fail("comp-target", {x, y});
    }
  if (r.has("comp-domain") || r.has("comp-source") || r.has("comp-target"))
    return r;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int xy = g.compose(x, y);
      if (xy < 0)
        continue;
      for (int z = 0; z < n; ++z) {
        const int yz = g.compose(y, z);
        if (yz < 0)
          continue;
        if (g.compose(xy, z) != g.compose(x, yz)) {
          r.fail("associativity", {x, y, z});
          x = y = z = n;
        }
      }
    }
  for (int x = 0; x < n; ++x) {
    if (g.compose(g.unit(g.s(x)), x) != x)
      r.fail("left-unit", {x});
    if (g.compose(x, g.unit(g.t(x))) != x)
      r.fail("right-unit", {x});
    const int i = g.inv[x];
    if (g.t(x) != g.s(i) || g.compose(x, i) != g.unit(g.s(x)))
      r.fail("left-inverse", {x});
    if (g.t(i) != g.s(x) || g.compose(i, x) != g.unit(g.t(x)))
      r.fail("right-inverse", {x});
  }
  return r;
}

/// Builds the bisection with the given section, or nullopt if sec is not a
/// section of s or its target composite is not bijective.
inline std::optional<Bisection> make_bisection(const FinitePrecategory &pc,
                                               std::vector<int> sec) {
  if (static_cast<int>(sec.size()) != pc.objects)
    return std::nullopt;
  std::vector<int> under(pc.objects);
  std::vector<bool> hit(pc.objects, false);
  for (int m = 0; m < pc.objects; ++m) {
    const int a = sec[m];
    if (a < 0 || a >= pc.arrows || pc.s[a] != m)
      return std::nullopt;
    under[m] = pc.t[a];
    if (hit[under[m]])
      return std::nullopt;
    hit[under[m]] = true;
  }
  return Bisection{std::move(sec), std::move(under)};
}

/// All bisections, in lexicographic order of their section arrays.
inline std::vector<Bisection> enumerate_bisections(const FinitePrecategory &pc) {
  detail::require_shape(pc);
  std::vector<std::vector<int>> candidates(pc.objects);
  for (int a = 0; a < pc.arrows; ++a)
    candidates[pc.s[a]].push_back(a);
  std::vector<Bisection> out;
  std::vector<int> sec(pc.objects, -1), under(pc.objects, -1);
  std::vector<bool> used(pc.objects, false);
  auto search = [&](auto &&self, int m) -> void {
    if (m == pc.objects) {
      out.push_back({sec, under});
      return;
    }
    for (int a : candidates[m]) {
      const int target = pc.t[a];
      if (used[target])
        continue;
      used[target] = true;
      sec[m] = a;
      under[m] = target;
      self(self, m + 1);
      used[target] = false;
    }
  };
  search(search, 0);
  return out;
}

inline std::vector<Bisection> enumerate_bisections(const FiniteGroupoid &g) {
  return enumerate_bisections(g.pc);
}

/// Index of b in the list, or -1.
inline int find_bisection(const std::vector<Bisection> &list, const Bisection &b) {
  const auto it = std::find(list.begin(), list.end(), b);
  return it == list.end() ? -1 : static_cast<int>(it - list.begin());
}

/// The bisection through the units.
inline Bisection unit_bisection(const FinitePrecategory &pc) {
  auto b = make_bisection(pc, pc.unit);
  if (!b)
    throw InputError("precategory: units do not form a bisection");
  return *b;
}

/// Arrows through which no bisection passes.
inline std::vector<int> arrows_without_bisection(const FinitePrecategory &pc) {
  std::vector<bool> covered(pc.arrows, false);
  for (const auto &b : enumerate_bisections(pc))
    for (int a : b.sec)
      covered[a] = true;
  std::vector<int> out;
  for (int a = 0; a < pc.arrows; ++a)
    if (!covered[a])
      out.push_back(a);
  return out;
}

/// X ⋆ Y = { xy : x ∈ X, y ∈ Y, t(x) = s(y) }.
inline ArrowSet star(const ArrowSet &X, const ArrowSet &Y, const FiniteGroupoid &g) {
  ArrowSet out;
  for (int x : X)
    for (int y : Y)
      if (g.t(x) == g.s(y))
        out.insert(g.compose(x, y));
  return out;
}

inline ArrowSet inverse_set(const ArrowSet &X, const FiniteGroupoid &g) {
  ArrowSet out;
  for (int x : X)
    out.insert(g.inv[x]);
  return out;
}

namespace detail {

inline void require_bisection(const FiniteGroupoid &g, const Bisection &b) {
  const auto checked = make_bisection(g.pc, b.sec);
  if (!checked || checked->underline != b.underline)
    throw InputError("not a bisection of this groupoid");
}

} // namespace detail

/// Σ ▷ γ = σ(s γ)⁻¹ · γ · σ(t γ), i.e. the unique element of Σ⁻¹ ⋆ {γ} ⋆ Σ.
/// Source σ̲(s γ), target σ̲(t γ).
inline int conjugate(const FiniteGroupoid &g, const Bisection &sigma, int gamma) {
  detail::require_bisection(g, sigma);
  const int left = g.inv[sigma.sec[g.s(gamma)]];
  const int right = sigma.sec[g.t(gamma)];
  return g.compose(g.compose(left, gamma), right);
}

/// Closure of {γ} under conjugation by every bisection. Requires a bisection
/// through every arrow; otherwise throws HypothesisError("bisection-through-arrow").
inline ArrowSet conjugacy_class(const FiniteGroupoid &g, int gamma) {
  if (gamma < 0 || gamma >= g.arrows())
    throw InputError("conjugacy_class: arrow out of range");
  const auto missing = arrows_without_bisection(g.pc);
  if (!missing.empty())
    throw HypothesisError("bisection-through-arrow", {missing.front()});
  const auto bis = enumerate_bisections(g);
  ArrowSet cls{gamma};
  std::queue<int> todo;
  todo.push(gamma);
  while (!todo.empty()) {
    const int x = todo.front();
    todo.pop();
    for (const auto &b : bis) {
      const int y = conjugate(g, b, x);
      if (cls.insert(y).second)
        todo.push(y);
    }
  }
  return cls;
}

struct Isotropy {
  std::vector<int> arrows; // Γ_m^m, ascending
  FiniteGroup group;       // mult[i][j] = index of comp(arrows[j], arrows[i])
};

struct OrbitData {
  std::vector<std::vector<int>> orbits; // ordered by smallest object
  std::vector<int> orbit_of;
  std::vector<Isotropy> isotropy; // per object
};

/// Connected components under (s,t) and the isotropy group at every object.
/// Isotropy groups use function-composition order (apply j, then i), which is
/// the order a group acquires when viewed as a one-object groupoid here.
inline OrbitData orbits_and_isotropy(const FiniteGroupoid &g) {
  detail::require_shape(g);
  const int k = g.objects();
  std::vector<int> parent(k);
  for (int m = 0; m < k; ++m)
    parent[m] = m;
  auto find = [&](int m) {
    while (parent[m] != m)
      m = parent[m] = parent[parent[m]];
    return m;
  };
  for (int x = 0; x < g.arrows(); ++x) {
    const int a = find(g.s(x)), b = find(g.t(x));
    if (a != b)
      parent[std::max(a, b)] = std::min(a, b);
  }
  OrbitData d;
  d.orbit_of.assign(k, -1);
  std::map<int, int> rootIndex;
  for (int m = 0; m < k; ++m) {
    const int root = find(m);
    auto [it, inserted] = rootIndex.emplace(root, static_cast<int>(d.orbits.size()));
    if (inserted)
      d.orbits.emplace_back();
    d.orbits[it->second].push_back(m);
    d.orbit_of[m] = it->second;
  }
  for (int m = 0; m < k; ++m) {
    std::vector<int> iso;
    for (int x = 0; x < g.arrows(); ++x)
      if (g.s(x) == m && g.t(x) == m)
        iso.push_back(x);
    const int n = static_cast<int>(iso.size());
    Table mult(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int c = g.compose(iso[j], iso[i]);
        mult[i][j] = static_cast<int>(std::lower_bound(iso.begin(), iso.end(), c) -
                                      iso.begin());
      }
    d.isotropy.push_back({iso, FiniteGroup(std::move(mult))});
  }
  return d;
}

/// Arrows γ' with both ends in the orbit of γ and s(γ') ≠ t(γ').
inline ArrowSet st_distinct_orbit_arrows(const FiniteGroupoid &g, int gamma) {
  const auto d = orbits_and_isotropy(g);
  const int o = d.orbit_of[g.s(gamma)];
  ArrowSet out;
  for (int x = 0; x < g.arrows(); ++x)
    if (g.s(x) != g.t(x) && d.orbit_of[g.s(x)] == o && d.orbit_of[g.t(x)] == o)
      out.insert(x);
  return out;
}

struct CoarseQuotient {
  FiniteGroupoid groupoid;
  std::vector<int> class_of; // arrow -> quotient arrow
};

/// Identifies arrows with equal source and target. Quotient arrows are
/// ordered lexicographically by (source, target).
inline CoarseQuotient coarse_quotient(const FiniteGroupoid &g) {
  detail::require_shape(g);
  std::map<std::pair<int, int>, int> index;
  for (int x = 0; x < g.arrows(); ++x)
    index.emplace(std::pair{g.s(x), g.t(x)}, 0);
  int next = 0;
  for (auto &[key, idx] : index)
    idx = next++;
  CoarseQuotient q;
  FiniteGroupoid &h = q.groupoid;
  h.pc.objects = g.objects();
  h.pc.arrows = next;
  h.pc.s.resize(next);
  h.pc.t.resize(next);
  for (const auto &[key, idx] : index) {
    h.pc.s[idx] = key.first;
    h.pc.t[idx] = key.second;
  }
  h.pc.unit.resize(g.objects());
  for (int m = 0; m < g.objects(); ++m)
    h.pc.unit[m] = index.at({m, m});
  h.comp.assign(next, std::vector<int>(next, -1));
  h.inv.resize(next);
  for (int a = 0; a < next; ++a) {
    h.inv[a] = index.at({h.pc.t[a], h.pc.s[a]});
    for (int b = 0; b < next; ++b)
      if (h.pc.t[a] == h.pc.s[b])
        h.comp[a][b] = index.at({h.pc.s[a], h.pc.t[b]});
  }
  q.class_of.resize(g.arrows());
  for (int x = 0; x < g.arrows(); ++x)
    q.class_of[x] = index.at({g.s(x), g.t(x)});
  return q;
}

namespace groupoids {

/// Pair groupoid on k objects: arrow (a,b) has index a*k + b.
inline FiniteGroupoid pair(int k) {
  FiniteGroupoid g;
  g.pc.objects = k;
  g.pc.arrows = k * k;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      g.pc.s.push_back(a);
      g.pc.t.push_back(b);
    }
  for (int m = 0; m < k; ++m)
    g.pc.unit.push_back(m * k + m);
  g.comp.assign(k * k, std::vector<int>(k * k, -1));
  g.inv.resize(k * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      g.inv[a * k + b] = b * k + a;
      for (int c = 0; c < k; ++c)
        g.comp[a * k + b][b * k + c] = a * k + c;
    }
  return g;
}

/// G over a single object; comp(x, y) = y·x (x first, then y).
inline FiniteGroupoid group_over_point(const FiniteGroup &G) {
  const int n = G.size();
  FiniteGroupoid g;
  g.pc.objects = 1;
  g.pc.arrows = n;
  g.pc.s.assign(n, 0);
  g.pc.t.assign(n, 0);
  g.pc.unit = {G.identity()};
  g.comp.assign(n, std::vector<int>(n));
  g.inv.resize(n);
  for (int x = 0; x < n; ++x) {
    g.inv[x] = G.inv(x);
    for (int y = 0; y < n; ++y)
      g.comp[x][y] = G.mul(y, x);
  }
  return g;
}

/// Action groupoid of a left action act[g][x] of G on X: arrow (g, x) has
/// index g*|X| + x, goes from x to g·x, and (g,x)(h, g·x) = (hg, x).
inline FiniteGroupoid action(const FiniteGroup &G, const Table &act) {
  const int n = G.size();
  const int k = act.empty() ? 0 : static_cast<int>(act[0].size());
  FiniteGroupoid g;
  g.pc.objects = k;
  g.pc.arrows = n * k;
  for (int a = 0; a < n; ++a)
    for (int x = 0; x < k; ++x) {
      g.pc.s.push_back(x);
      g.pc.t.push_back(act[a][x]);
    }
  for (int x = 0; x < k; ++x)
    g.pc.unit.push_back(G.identity() * k + x);
  g.comp.assign(n * k, std::vector<int>(n * k, -1));
  g.inv.resize(n * k);
  for (int a = 0; a < n; ++a)
    for (int x = 0; x < k; ++x) {
      const int ax = act[a][x];
      g.inv[a * k + x] = G.inv(a) * k + ax;
      for (int b = 0; b < n; ++b)
        g.comp[a * k + x][b * k + ax] = G.mul(b, a) * k + x;
    }
  return g;
}

/// Z_n acting on Z_k by g·x = (x + g) mod k.
inline FiniteGroupoid cyclic_shift(int n, int k) {
  Table act(n, std::vector<int>(k));
  for (int a = 0; a < n; ++a)
    for (int x = 0; x < k; ++x)
      act[a][x] = (x + a) % k;
  return action(groups::cyclic(n), act);
}

/// Disjoint union; arrows and objects of b are shifted past those of a.
inline FiniteGroupoid disjoint_union(const FiniteGroupoid &a, const FiniteGroupoid &b) {
  FiniteGroupoid g;
  const int na = a.arrows(), ka = a.objects();
  g.pc.objects = ka + b.objects();
  g.pc.arrows = na + b.arrows();
  g.pc.s = a.pc.s;
  g.pc.t = a.pc.t;
  g.pc.unit = a.pc.unit;
  g.inv = a.inv;
  for (int x = 0; x < b.arrows(); ++x) {
    g.pc.s.push_back(b.s(x) + ka);
    g.pc.t.push_back(b.t(x) + ka);
    g.inv.push_back(b.inv[x] + na);
  }
  for (int m = 0; m < b.objects(); ++m)
    g.pc.unit.push_back(b.unit(m) + na);
  g.comp.assign(g.pc.arrows, std::vector<int>(g.pc.arrows, -1));
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < na; ++y)
      g.comp[x][y] = a.comp[x][y];
  for (int x = 0; x < b.arrows(); ++x)
    for (int y = 0; y < b.arrows(); ++y) {
      const int z = b.comp[x][y];
      g.comp[x + na][y + na] = z < 0 ? -1 : z + na;
    }
  return g;
}

/// Componentwise product: object (m, n) is m*|b objects| + n, arrow (x, y) is
/// x*|b arrows| + y.
inline FiniteGroupoid product(const FiniteGroupoid &a, const FiniteGroupoid &b) {
  const int ka = a.objects(), kb = b.objects();
  const int na = a.arrows(), nb = b.arrows();
  FiniteGroupoid g;
  g.pc.objects = ka * kb;
  g.pc.arrows = na * nb;
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < nb; ++y) {
      g.pc.s.push_back(a.s(x) * kb + b.s(y));
      g.pc.t.push_back(a.t(x) * kb + b.t(y));
      g.inv.push_back(a.inv[x] * nb + b.inv[y]);
    }
  for (int m = 0; m < ka; ++m)
    for (int n = 0; n < kb; ++n)
      g.pc.unit.push_back(a.unit(m) * nb + b.unit(n));
  g.comp.assign(na * nb, std::vector<int>(na * nb, -1));
  for (int x = 0; x < na * nb; ++x)
    for (int y = 0; y < na * nb; ++y) {
      const int u = a.compose(x / nb, y / nb), v = b.compose(x % nb, y % nb);
      if (u >= 0 && v >= 0)
        g.comp[x][y] = u * nb + v;
    }
  return g;
}

/// Only unit arrows.
inline FiniteGroupoid units_only(int k) {
  FiniteGroupoid g;
  g.pc.objects = k;
  g.pc.arrows = k;
  for (int m = 0; m < k; ++m) {
    g.pc.s.push_back(m);
    g.pc.t.push_back(m);
    g.pc.unit.push_back(m);
    g.inv.push_back(m);
  }
  g.comp.assign(k, std::vector<int>(k, -1));
  for (int m = 0; m < k; ++m)
    g.comp[m][m] = m;
  return g;
}

} // namespace groupoids
} // namespace rackworks
