#pragma once

// Exhaustive enumeration of small racks and rack isomorphism.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rack.hpp"

namespace rackworks {

/// Relabeling π with π(x▷y) = π(x)▷'π(y), if one exists. Base points are
/// ignored. Exhaustive over all permutations for n ≤ 6, backtracking with
/// partial-map consistency beyond that.
inline std::optional<std::vector<int>> rack_isomorphic(const FiniteRack &a,
                                                       const FiniteRack &b) {
  const int n = a.size();
  if (n != b.size())
    return std::nullopt;
  if (n <= 6) {
    std::vector<int> pi(n);
    for (int i = 0; i < n; ++i)
      pi[i] = i;
    do {
      bool ok = true;
      for (int x = 0; x < n && ok; ++x)
        for (int y = 0; y < n && ok; ++y)
          ok = pi[a.op(x, y)] == b.op(pi[x], pi[y]);
      if (ok)
        return pi;
    } while (std::next_permutation(pi.begin(), pi.end()));
    return std::nullopt;
  }

  std::vector<int> pi(n, -1);
  std::vector<bool> used(n, false);
  // Checks every fully-mapped triple involving the newest element k.
  auto consistent = [&](int k) {
    for (int x = 0; x <= k; ++x)
      for (int y = 0; y <= k; ++y) {
        if (x != k && y != k)
          continue;
        const int z = a.op(x, y);
        if (pi[z] >= 0 && pi[z] != b.op(pi[x], pi[y]))
          return false;
      }
    // Entries with a freshly determined image.
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (pi[x] >= 0 && pi[y] >= 0 && a.op(x, y) == k &&
            pi[k] != b.op(pi[x], pi[y]))
          return false;
    return true;
  };
  auto search = [&](auto &&self, int k) -> bool {
    if (k == n)
      return true;
    for (int v = 0; v < n; ++v) {
      if (used[v])
        continue;
      pi[k] = v;
      used[v] = true;
      if (consistent(k) && self(self, k + 1))
        return true;
      used[v] = false;
      pi[k] = -1;
    }
    return false;
  };
  if (search(search, 0))
    return pi;
  return std::nullopt;
}

/// Lexicographically minimal row-major table over all simultaneous
/// relabelings. Branch and bound: labels are handed out in order
/// 0, 1, ... and a branch is cut as soon as the determined prefix of the
/// relabeled table exceeds the best table found so far.
inline Table canonical_form(const Table &table) {
  const int n = static_cast<int>(table.size());
  std::vector<int> oldOf(n, -1); // new label -> old element
  std::vector<int> newOf(n, -1); // old element -> new label
  std::vector<int> best;
  std::vector<int> current(n * n, -1);

  // Compares the determined prefix of the relabeled table against best.
  // Returns -1 (smaller), 0 (equal so far), 1 (larger).
  auto compare_prefix = [&](int assigned) {
    if (best.empty())
      return -1;
    for (int idx = 0; idx < n * n; ++idx) {
      const int i = idx / n, j = idx % n;
      if (i >= assigned || j >= assigned)
        return 0;
      const int oldv = table[oldOf[i]][oldOf[j]];
      const int v = newOf[oldv];
      if (v < 0) {
        // The value will receive a label ≥ assigned.
        if (assigned > best[idx])
          return 1;
        return 0;
      }
      if (v != best[idx])
        return v < best[idx] ? -1 : 1;
    }
    return 0;
  };

  auto search = [&](auto &&self, int k) -> void {
    if (k == n) {
      std::vector<int> t(n * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          t[i * n + j] = newOf[table[oldOf[i]][oldOf[j]]];
      if (best.empty() || t < best)
        best = std::move(t);
      return;
    }
    for (int old = 0; old < n; ++old) {
      if (newOf[old] >= 0)
        continue;
      oldOf[k] = old;
      newOf[old] = k;
      if (compare_prefix(k + 1) <= 0)
        self(self, k + 1);
      newOf[old] = -1;
      oldOf[k] = -1;
    }
  };
  search(search, 0);

  Table out(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[i][j] = best[i * n + j];
  return out;
}

struct Enumeration {
  std::vector<FiniteRack> racks; // all labeled racks, or one per class
  std::size_t labeled = 0;
  std::size_t iso_classes = 0;
};

namespace detail {

/// Calls visit(rows) for every labeled rack on n points. Rows are
/// permutations; once rows x and y are fixed, self-distributivity forces
/// L_{x▷y} = L_x ∘ L_y ∘ L_x⁻¹, which is propagated to prune the search.
template <class Visit> void for_each_rack(int n, Visit &&visit) {
  const auto perms = groups::permutations(n);
  std::vector<std::vector<int>> rows(n);

  auto compose_conj = [n](const std::vector<int> &lx, const std::vector<int> &ly) {
    std::vector<int> inv(n), out(n);
    for (int i = 0; i < n; ++i)
      inv[lx[i]] = i;
    for (int i = 0; i < n; ++i)
      out[i] = lx[ly[inv[i]]];
    return out;
  };

  // Closes the partial assignment; false on a contradiction.
  auto propagate = [&](std::vector<std::vector<int>> &r) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int x = 0; x < n; ++x) {
        if (r[x].empty())
          continue;
        for (int y = 0; y < n; ++y) {
          if (r[y].empty())
            continue;
          const int z = r[x][y];
          auto forced = compose_conj(r[x], r[y]);
          if (r[z].empty()) {
            r[z] = std::move(forced);
            changed = true;
          } else if (r[z] != forced) {
            return false;
          }
        }
      }
    }
    return true;
  };

  auto search = [&](auto &&self, std::vector<std::vector<int>> r) -> void {
    int k = 0;
    while (k < n && !r[k].empty())
      ++k;
    if (k == n) {
      visit(r);
      return;
    }
    for (const auto &p : perms) {
      auto next = r;
      next[k] = p;
      if (propagate(next))
        self(self, std::move(next));
    }
  };
  search(search, rows);
}

} // namespace detail

/// All racks on {0..n-1}, 1 ≤ n ≤ 5; with up_to_iso one representative (the
/// canonical form) per isomorphism class.
inline Enumeration enumerate_racks(int n, bool up_to_iso) {
  if (n < 1 || n > 5)
    throw InputError("enumerate_racks: n must be in [1,5], got " +
                     std::to_string(n));
  Enumeration out;
  std::set<Table> classes;
  detail::for_each_rack(n, [&](const std::vector<std::vector<int>> &rows) {
    FiniteRack r{rows, std::nullopt};
    if (!check_rack(r).valid)
      throw std::logic_error("enumerate_racks produced an invalid table");
    ++out.labeled;
    if (up_to_iso)
      classes.insert(canonical_form(r.table));
    else
      out.racks.push_back(std::move(r));
  });
  if (up_to_iso) {
    for (const auto &t : classes)
      out.racks.push_back({t, std::nullopt});
    out.iso_classes = classes.size();
  } else {
    std::set<Table> seen;
    for (const auto &r : out.racks)
      seen.insert(canonical_form(r.table));
    out.iso_classes = seen.size();
  }
  return out;
}

} // namespace rackworks
