#pragma once

// Finite groups and racks given by operation tables on {0..n-1}.
// Convention: table[x][y] = x ▷ y (left racks), row-major, 0-indexed.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace rackworks {

using Table = std::vector<std::vector<int>>;

namespace detail {

inline void require_square(const Table &table, const char *what) {
  const std::size_t n = table.size();
  if (n == 0)
    throw InputError(std::string(what) + ": empty table");
  for (std::size_t x = 0; x < n; ++x) {
    if (table[x].size() != n)
      throw InputError(std::string(what) + ": row " + std::to_string(x) +
                       " has length " + std::to_string(table[x].size()) +
                       ", expected " + std::to_string(n));
    for (std::size_t y = 0; y < n; ++y)
      if (table[x][y] < 0 || static_cast<std::size_t>(table[x][y]) >= n)
        throw InputError(std::string(what) + ": entry [" + std::to_string(x) +
                         "][" + std::to_string(y) + "] = " +
                         std::to_string(table[x][y]) + " out of range");
  }
}

} // namespace detail

/// Finite group by Cayley table; identity and inverses are inferred and the
/// group axioms are validated on construction.
class FiniteGroup {
public:
  explicit FiniteGroup(Table mult) : mult_(std::move(mult)) {
    detail::require_square(mult_, "group");
    const int n = size();
    id_ = -1;
    for (int e = 0; e < n && id_ < 0; ++e) {
      bool ok = true;
      for (int x = 0; x < n && ok; ++x)
        ok = mult_[e][x] == x && mult_[x][e] == x;
      if (ok)
        id_ = e;
    }
    if (id_ < 0)
      throw InputError("group: no two-sided identity");
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          if (mult_[mult_[x][y]][z] != mult_[x][mult_[y][z]])
            throw InputError("group: associativity fails at (" +
                             std::to_string(x) + "," + std::to_string(y) +
                             "," + std::to_string(z) + ")");
    inv_.assign(n, -1);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y)
        if (mult_[x][y] == id_ && mult_[y][x] == id_)
          inv_[x] = y;
      if (inv_[x] < 0)
        throw InputError("group: element " + std::to_string(x) +
                         " has no inverse");
    }
  }

  int size() const { return static_cast<int>(mult_.size()); }
  int identity() const { return id_; }
  int mul(int x, int y) const { return mult_[x][y]; }
  int inv(int x) const { return inv_[x]; }
  const Table &table() const { return mult_; }

  bool is_abelian() const {
    for (int x = 0; x < size(); ++x)
      for (int y = 0; y < x; ++y)
        if (mult_[x][y] != mult_[y][x])
          return false;
    return true;
  }

  friend bool operator==(const FiniteGroup &a, const FiniteGroup &b) {
    return a.mult_ == b.mult_;
  }

private:
  Table mult_;
  int id_ = 0;
  std::vector<int> inv_;
};

struct FiniteRack {
  Table table;
  std::optional<int> base;

  int size() const { return static_cast<int>(table.size()); }
  int op(int x, int y) const { return table[x][y]; }

  bool is_quandle() const {
    for (int x = 0; x < size(); ++x)
      if (table[x][x] != x)
        return false;
    return true;
  }

  friend bool operator==(const FiniteRack &, const FiniteRack &) = default;
};

/// Checks row bijectivity, self-distributivity and (if a base is given) the
/// pointed axioms. Throws InputError on a malformed table; axiom failures are
/// returned as violations with the lexicographically first witness.
///
/// Rules: "bijective" (x, y1, y2) with x▷y1 = x▷y2;
///        "self-distributive" (x, y, z);
///        "pointed-left" (e, y) with e▷y != y;
///        "pointed-right" (x, e) with x▷e != e.
inline CheckReport check_rack(const Table &table,
                              std::optional<int> base = std::nullopt) {
  detail::require_square(table, "rack");
  const int n = static_cast<int>(table.size());
  if (base && (*base < 0 || *base >= n))
    throw InputError("rack: base point " + std::to_string(*base) +
                     " out of range");
  CheckReport report;
  for (int x = 0; x < n && !report.has("bijective"); ++x) {
    std::vector<int> seen(n, -1);
    for (int y = 0; y < n; ++y) {
      const int v = table[x][y];
      if (seen[v] >= 0) {
        report.fail("bijective", {x, seen[v], y});
        break;
      }
      seen[v] = y;
    }
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (table[x][table[y][z]] != table[table[x][y]][table[x][z]]) {
          report.fail("self-distributive", {x, y, z});
          x = y = z = n;
        }
  if (base) {
    const int e = *base;
    for (int y = 0; y < n; ++y)
      if (table[e][y] != y) {
        report.fail("pointed-left", {e, y});
        break;
      }
    for (int x = 0; x < n; ++x)
      if (table[x][e] != e) {
        report.fail("pointed-right", {x, e});
        break;
      }
  }
  return report;
}

inline CheckReport check_rack(const FiniteRack &rack) {
  return check_rack(rack.table, rack.base);
}

/// Group axioms on a Cayley table, reported rather than thrown.
/// Rules: "identity" () when no two-sided identity exists;
///        "associativity" (x, y, z); "inverse" (x).
inline CheckReport check_group(const Table &mult) {
  detail::require_square(mult, "group");
  const int n = static_cast<int>(mult.size());
  CheckReport report;
  int id = -1;
  for (int e = 0; e < n && id < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      ok = mult[e][x] == x && mult[x][e] == x;
    if (ok)
      id = e;
  }
  if (id < 0)
    report.fail("identity", {});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (mult[mult[x][y]][z] != mult[x][mult[y][z]]) {
          report.fail("associativity", {x, y, z});
          x = y = z = n;
        }
  if (id >= 0)
    for (int x = 0; x < n; ++x) {
      bool found = false;
      for (int y = 0; y < n && !found; ++y)
        found = mult[x][y] == id && mult[y][x] == id;
      if (!found) {
        report.fail("inverse", {x});
        break;
      }
    }
  return report;
}

/// x ▷ y = x y x⁻¹, pointed at the identity.
inline FiniteRack conjugation_rack(const FiniteGroup &g) {
  const int n = g.size();
  FiniteRack r{Table(n, std::vector<int>(n)), g.identity()};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      r.table[x][y] = g.mul(g.mul(x, y), g.inv(x));
  return r;
}

/// A G-set X of size m with an equivariant map p : X → G (G acting on itself
/// by conjugation). action[g][x] = g·x.
struct AugmentedRackData {
  FiniteGroup group;
  int m = 0;
  std::vector<int> p;
  Table action;
};

/// Validates shape, the left group action laws and the augmentation identity
/// p(g·x) = g p(x) g⁻¹, throwing HypothesisError with a witness otherwise.
inline void validate_augmented(const AugmentedRackData &d) {
  const FiniteGroup &g = d.group;
  const int n = g.size();
  if (d.m <= 0)
    throw InputError("augmented rack: empty carrier");
  if (static_cast<int>(d.p.size()) != d.m)
    throw InputError("augmented rack: p has wrong length");
  for (int x = 0; x < d.m; ++x)
    if (d.p[x] < 0 || d.p[x] >= n)
      throw InputError("augmented rack: p[" + std::to_string(x) +
                       "] out of range");
  if (static_cast<int>(d.action.size()) != n)
    throw InputError("augmented rack: action must have one row per group element");
  for (const auto &row : d.action) {
    if (static_cast<int>(row.size()) != d.m)
      throw InputError("augmented rack: action row has wrong length");
    for (int v : row)
      if (v < 0 || v >= d.m)
        throw InputError("augmented rack: action entry out of range");
  }
  for (int x = 0; x < d.m; ++x)
    if (d.action[g.identity()][x] != x)
      throw HypothesisError("action-identity", {x});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int x = 0; x < d.m; ++x)
        if (d.action[g.mul(a, b)][x] != d.action[a][d.action[b][x]])
          throw HypothesisError("action-compatibility", {a, b, x});
  for (int a = 0; a < n; ++a)
    for (int x = 0; x < d.m; ++x)
      if (d.p[d.action[a][x]] != g.mul(g.mul(a, d.p[x]), g.inv(a)))
        throw HypothesisError("augmentation-identity", {a, x});
}

/// x ▷ y := p(x)·y.
inline FiniteRack augmented_rack(const AugmentedRackData &d) {
  validate_augmented(d);
  FiniteRack r{Table(d.m, std::vector<int>(d.m)), std::nullopt};
  for (int x = 0; x < d.m; ++x)
    for (int y = 0; y < d.m; ++y)
      r.table[x][y] = d.action[d.p[x]][y];
  return r;
}

namespace groups {

inline FiniteGroup cyclic(int n) {
  Table t(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      t[x][y] = (x + y) % n;
  return FiniteGroup(std::move(t));
}

/// Direct product; element (a, b) is indexed a * |h| + b.
inline FiniteGroup product(const FiniteGroup &g, const FiniteGroup &h) {
  const int n = g.size() * h.size();
  Table t(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      t[x][y] = g.mul(x / h.size(), y / h.size()) * h.size() +
                h.mul(x % h.size(), y % h.size());
  return FiniteGroup(std::move(t));
}

/// Permutations of {0..k-1} in lexicographic order, (pq)(i) = p(q(i)).
inline std::vector<std::vector<int>> permutations(int k) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(k);
  for (int i = 0; i < k; ++i)
    p[i] = i;
  do
    perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return perms;
}

inline FiniteGroup from_permutations(const std::vector<std::vector<int>> &perms) {
  const int n = static_cast<int>(perms.size());
  Table t(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      std::vector<int> c(perms[x].size());
      for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = perms[x][perms[y][i]];
      const auto it = std::find(perms.begin(), perms.end(), c);
      if (it == perms.end())
        throw InputError("permutation set not closed under composition");
      t[x][y] = static_cast<int>(it - perms.begin());
    }
  return FiniteGroup(std::move(t));
}

inline FiniteGroup symmetric(int k) { return from_permutations(permutations(k)); }

/// Symmetries of a square acting on vertices 0..3, rotations first.
inline FiniteGroup dihedral4() {
  std::vector<std::vector<int>> perms;
  for (int r = 0; r < 4; ++r) {
    std::vector<int> p(4);
    for (int i = 0; i < 4; ++i)
      p[i] = (i + r) % 4;
    perms.push_back(p);
  }
  for (int r = 0; r < 4; ++r) {
    std::vector<int> p(4);
    for (int i = 0; i < 4; ++i)
      p[i] = ((r - i) % 4 + 4) % 4;
    perms.push_back(p);
  }
  return from_permutations(perms);
}

struct Named {
  std::string name;
  FiniteGroup group;
};

/// Z2, Z3, Z4, Z2×Z2, S3, D4.
inline std::vector<Named> catalog() {
  return {{"Z2", cyclic(2)},
          {"Z3", cyclic(3)},
          {"Z4", cyclic(4)},
          {"Z2xZ2", product(cyclic(2), cyclic(2))},
          {"S3", symmetric(3)},
          {"D4", dihedral4()}};
}

} // namespace groups
} // namespace rackworks
