#include <gtest/gtest.h>

#include <rackworks/rackoid.hpp>

#include "instances.hpp"

using namespace rackworks;

namespace {

// Fibers of one rack over k objects: arrow (m, y) is m*|R| + y, s = t = m.
// Bisection Σ picks x_m in each fiber and acts by x_m ▷ −.
RackoidTable bundle_of_racks(const FiniteRack &R, int k) {
  const int n = R.size();
  RackoidTable r;
  r.pc.objects = k;
  r.pc.arrows = k * n;
  for (int m = 0; m < k; ++m)
    for (int y = 0; y < n; ++y) {
      r.pc.s.push_back(m);
      r.pc.t.push_back(m);
    }
  if (R.base)
    for (int m = 0; m < k; ++m)
      r.pc.unit.push_back(m * n + *R.base);
  r.bis = enumerate_bisections(r.pc);
  for (const auto &b : r.bis) {
    std::vector<int> row(k * n);
    for (int m = 0; m < k; ++m)
      for (int y = 0; y < n; ++y)
        row[m * n + y] = m * n + R.op(b.sec[m] - m * n, y);
    r.op.push_back(std::move(row));
  }
  return r;
}

FiniteGroupoid z2_over_point() { return groupoids::group_over_point(groups::cyclic(2)); }

// Conjugation of pair-groupoid arrows by a bisection, computed from the
// underline alone: (m, n) ↦ (f(m), f(n)).
int pair_conjugate(int k, const Bisection &b, int arrow) {
  return b.underline[arrow / k] * k + b.underline[arrow % k];
}

} // namespace

TEST(CheckRackoid, FromPairGroupoids) {
  for (int k = 1; k <= 4; ++k) {
    const auto r = rackoid_from_groupoid(groupoids::pair(k));
    const auto rep = check_rackoid(r, true);
    EXPECT_TRUE(rep.valid) << k;
    for (std::size_t b = 0; b < r.bis.size(); ++b)
      for (int x = 0; x < r.pc.arrows; ++x)
        EXPECT_EQ(r.op[b][x], pair_conjugate(k, r.bis[b], x));
  }
}

TEST(CheckRackoid, FromActionAndProductGroupoids) {
  EXPECT_TRUE(check_rackoid(rackoid_from_groupoid(groupoids::cyclic_shift(2, 2)), true).valid);
  EXPECT_TRUE(check_rackoid(rackoid_from_groupoid(groupoids::cyclic_shift(4, 2)), true).valid);
  EXPECT_TRUE(check_rackoid(rackoid_from_groupoid(groupoids::cyclic_shift(6, 3)), true).valid);
  EXPECT_TRUE(check_rackoid(
                  rackoid_from_groupoid(groupoids::product(groupoids::pair(2), z2_over_point())),
                  true)
                  .valid);
  EXPECT_TRUE(check_rackoid(rackoid_from_groupoid(groupoids::disjoint_union(
                                groupoids::pair(2), groupoids::group_over_point(groups::symmetric(3)))),
                            true)
                  .valid);
}

TEST(CheckRackoid, SinglePointReproducesConjugationRack) {
  for (const auto &[name, G] : groups::catalog()) {
    const auto r = rackoid_from_groupoid(groupoids::group_over_point(G));
    const auto rack = conjugation_rack(G);
    ASSERT_EQ(static_cast<int>(r.bis.size()), G.size());
    for (int b = 0; b < G.size(); ++b)
      ASSERT_EQ(r.bis[b].sec[0], b);
    EXPECT_EQ(r.op, rack.table) << name;
    EXPECT_TRUE(check_rackoid(r, true).valid) << name;
  }
}

TEST(CheckRackoid, BundleOfTrivialRacks) {
  const FiniteRack trivial{{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}, 0};
  const auto r = bundle_of_racks(trivial, 2);
  for (const auto &row : r.op)
    for (int x = 0; x < r.pc.arrows; ++x)
      EXPECT_EQ(row[x], x);
  EXPECT_TRUE(check_rackoid(r, true).valid);
  EXPECT_TRUE(check_rackoid(r, false).valid);
}

TEST(CheckRackoid, BundleOfConjugationRacks) {
  const auto r = bundle_of_racks(conjugation_rack(groups::symmetric(3)), 2);
  EXPECT_EQ(r.bis.size(), 36u);
  EXPECT_TRUE(check_rackoid(r, true).valid);
}

TEST(CheckRackoid, PerturbationDetected) {
  auto r = rackoid_from_groupoid(groupoids::pair(3));
  // Swap the images of two arrows with different endpoints under one
  // bisection: compatibility breaks.
  std::swap(r.op[1][0], r.op[1][1]);
  const auto rep = check_rackoid(r, true);
  EXPECT_FALSE(rep.valid);
  EXPECT_TRUE(rep.has("compatibility"));

  // Swapping within one isotropy fiber keeps compatibility but breaks
  // self-distributivity.
  auto b = bundle_of_racks(conjugation_rack(groups::symmetric(3)), 1);
  std::swap(b.op[1][2], b.op[1][3]);
  const auto rb = check_rackoid(b, false);
  EXPECT_FALSE(rb.valid);
  EXPECT_FALSE(rb.has("compatibility"));
  EXPECT_TRUE(rb.has("self-distributive"));
  const auto &w = rb.violations.front().witness;
  ASSERT_EQ(w.size(), 3u);
}

TEST(CheckRackoid, UnitLawsDetected) {
  auto r = rackoid_from_groupoid(groupoids::group_over_point(groups::symmetric(3)));
  // Replace the identity's row by conjugation by a transposition.
  r.op[0] = r.op[1];
  const auto rep = check_rackoid(r, true);
  EXPECT_FALSE(rep.valid);
  EXPECT_TRUE(rep.has("unit-acts-trivially"));
}

TEST(CheckRackoid, RejectsMalformedInput) {
  auto r = rackoid_from_groupoid(groupoids::pair(2));
  auto empty = r;
  empty.bis.clear();
  empty.op.clear();
  EXPECT_THROW(check_rackoid(empty, true), InputError);
  auto bad = r;
  bad.op[0][0] = 17;
  EXPECT_THROW(check_rackoid(bad, true), InputError);
  auto shortRow = r;
  shortRow.op[0].pop_back();
  EXPECT_THROW(check_rackoid(shortRow, true), InputError);
  auto semi = r;
  semi.pc.unit.clear();
  EXPECT_THROW(check_rackoid(semi, true), InputError);
  EXPECT_TRUE(check_rackoid(semi, false).valid);
}

TEST(ActOnBisection, UnderlineConjugationLaw) {
  const auto r = rackoid_from_groupoid(groupoids::pair(3));
  const auto units = unit_bisection(r.pc);
  const int ub = find_bisection(r.bis, units);
  for (int s = 0; s < static_cast<int>(r.bis.size()); ++s)
    for (int t = 0; t < static_cast<int>(r.bis.size()); ++t) {
      const auto img = act_on_bisection(r, s, t);
      const auto &f = r.bis[s].underline, &g = r.bis[t].underline;
      for (int m = 0; m < 3; ++m)
        EXPECT_EQ(img.underline[f[m]], f[g[m]]);
      if (s == ub)
        EXPECT_EQ(img, r.bis[t]);
      if (t == ub)
        EXPECT_EQ(img, units);
    }
}

TEST(IsotropyRack, GroupOverPointRecoversConjugation) {
  const auto G = groups::dihedral4();
  const auto r = rackoid_from_groupoid(groupoids::group_over_point(G));
  const auto iso = isotropy_rack(r, 0);
  const auto rack = conjugation_rack(G);
  EXPECT_EQ(iso.rack.table, rack.table);
  EXPECT_EQ(iso.rack.base, rack.base);
}

TEST(IsotropyRack, PairGroupoidIsSingleton) {
  const auto r = rackoid_from_groupoid(groupoids::pair(3));
  for (int m = 0; m < 3; ++m) {
    const auto iso = isotropy_rack(r, m);
    EXPECT_EQ(iso.arrows, std::vector<int>{m * 3 + m});
    EXPECT_EQ(iso.rack.table, (Table{{0}}));
  }
}

TEST(IsotropyRack, BundleRecoversFiber) {
  const auto R = conjugation_rack(groups::symmetric(3));
  const auto r = bundle_of_racks(R, 2);
  for (int m = 0; m < 2; ++m) {
    const auto iso = isotropy_rack(r, m);
    EXPECT_EQ(iso.rack.table, R.table);
    EXPECT_TRUE(check_rack(iso.rack).valid);
  }
}

TEST(IsotropyRack, ActionGroupoidPassesRackCheck) {
  const auto r = rackoid_from_groupoid(groupoids::cyclic_shift(4, 2));
  for (int m = 0; m < 2; ++m) {
    const auto iso = isotropy_rack(r, m);
    EXPECT_EQ(iso.arrows.size(), 2u);
    EXPECT_TRUE(check_rack(iso.rack).valid);
  }
}

TEST(IsotropyRack, ChoiceDependenceRejected) {
  // Bisections through a fixed isotropy arrow at 0 differ only over the
  // other object. Tampering with one of them breaks independence.
  auto r = rackoid_from_groupoid(groupoids::product(groupoids::pair(2), z2_over_point()));
  const int through = r.bis[0].sec[0];
  int other = -1;
  for (int b = 1; b < static_cast<int>(r.bis.size()); ++b)
    if (r.bis[b].sec[0] == through) {
      other = b;
      break;
    }
  ASSERT_GE(other, 0);
  EXPECT_NO_THROW(isotropy_rack(r, 0));
  std::swap(r.op[other][0], r.op[other][1]);
  try {
    isotropy_rack(r, 0);
    FAIL();
  } catch (const HypothesisError &e) {
    EXPECT_EQ(e.rule(), "choice-dependent");
    EXPECT_EQ(e.witness().size(), 4u);
  }
}

TEST(RestrictStDistinct, PairGroupoid) {
  const auto r = rackoid_from_groupoid(groupoids::pair(3));
  const auto sub = restrict_st_distinct(r);
  EXPECT_EQ(sub.rackoid.pc.arrows, 6);
  EXPECT_FALSE(sub.rackoid.pc.unital());
  for (int a = 0; a < sub.rackoid.pc.arrows; ++a)
    EXPECT_NE(sub.rackoid.pc.s[a], sub.rackoid.pc.t[a]);
  EXPECT_TRUE(check_rackoid(sub.rackoid, false).valid);
}

TEST(RestrictStDistinct, BundleIsEmpty) {
  const auto r = bundle_of_racks(conjugation_rack(groups::symmetric(3)), 2);
  EXPECT_THROW(restrict_st_distinct(r), InputError);
}

TEST(RestrictStDistinct, CoarseQuotients) {
  for (const auto &g : {groupoids::cyclic_shift(4, 2), groupoids::cyclic_shift(6, 3),
                        groupoids::pair(4)}) {
    const auto q = coarse_quotient(g).groupoid;
    const auto sub = restrict_st_distinct(rackoid_from_groupoid(q));
    EXPECT_TRUE(check_rackoid(sub.rackoid, false).valid);
  }
}

TEST(Rackoid, ConjugacyClassIsOrbitUnderOp) {
  for (const auto &g : {groupoids::pair(3), groupoids::cyclic_shift(4, 2)}) {
    const auto r = rackoid_from_groupoid(g);
    for (int x = 0; x < g.arrows(); ++x) {
      ArrowSet orbit{x};
      bool grew = true;
      while (grew) {
        grew = false;
        for (const auto &row : r.op)
          for (int y : ArrowSet(orbit))
            grew |= orbit.insert(row[y]).second;
      }
      EXPECT_EQ(orbit, conjugacy_class(g, x));
    }
  }
}

TEST(AugmentedRackoid, TautologicalDataGivesConjugationRackoid) {
  for (const auto &g : {groupoids::pair(3), groupoids::cyclic_shift(4, 2)}) {
    const auto conj = rackoid_from_groupoid(g);
    std::vector<int> id(g.arrows());
    for (int x = 0; x < g.arrows(); ++x)
      id[x] = x;
    const auto r = augmented_rackoid(g.pc, g, id, conj.op);
    EXPECT_EQ(r, conj);
    EXPECT_TRUE(check_rackoid(r, true).valid);
  }
}

TEST(AugmentedRackoid, TwoParallelCopiesWithFoldMap) {
  const auto d = instances::two_parallel_copies(3);
  const auto r = augmented_rackoid(d.X, d.g, d.fold, d.action);
  EXPECT_EQ(r.bis.size(), enumerate_bisections(d.g).size() * 8);
  EXPECT_TRUE(check_rackoid(r, true).valid);
  EXPECT_TRUE(check_rackoid(restrict_st_distinct(r).rackoid, false).valid);
}

TEST(AugmentedRackoid, ViolationsRejected) {
  const auto g = groupoids::pair(3);
  const auto conj = rackoid_from_groupoid(g);
  std::vector<int> id(g.arrows());
  for (int x = 0; x < g.arrows(); ++x)
    id[x] = x;

  // Equivariance broken by a row acting trivially.
  auto action = conj.op;
  for (int x = 0; x < g.arrows(); ++x)
    action.back()[x] = x;
  try {
    augmented_rackoid(g.pc, g, id, action);
    FAIL();
  } catch (const HypothesisError &e) {
    EXPECT_TRUE(e.rule() == "augmentation-identity" || e.rule() == "action-compatibility")
        << e.rule();
  }

  // A p that does not intertwine targets.
  auto p = id;
  p[1] = 2;
  try {
    augmented_rackoid(g.pc, g, p, conj.op);
    FAIL();
  } catch (const HypothesisError &e) {
    EXPECT_EQ(e.rule(), "intertwine-target");
    EXPECT_EQ(e.witness(), (std::vector<long>{1}));
  }

  // p sends the unit to the non-identity of Z2.
  const auto z2 = z2_over_point();
  try {
    augmented_rackoid(z2.pc, z2, {1, 1}, Table{{0, 1}, {0, 1}});
    FAIL();
  } catch (const HypothesisError &e) {
    EXPECT_EQ(e.rule(), "intertwine-unit");
  }

  EXPECT_THROW(augmented_rackoid(g.pc, g, id, Table{}), InputError);
}

TEST(AugmentedRackoid, PureAugmentationViolation) {
  // Trivial action of non-abelian S3 on itself with p = id.
  const auto G = groups::symmetric(3);
  const auto g = groupoids::group_over_point(G);
  std::vector<int> id(G.size());
  for (int x = 0; x < G.size(); ++x)
    id[x] = x;
  Table trivialAction(G.size(), id);
  try {
    augmented_rackoid(g.pc, g, id, trivialAction);
    FAIL();
  } catch (const HypothesisError &e) {
    EXPECT_EQ(e.rule(), "augmentation-identity");
    const auto &w = e.witness();
    ASSERT_EQ(w.size(), 2u);
    EXPECT_NE(G.mul(G.mul(w[0], w[1]), G.inv(w[0])), w[1]);
  }
}

TEST(FiberProduct, IdentityOverUnitGroupoid) {
  const int k = 3;
  std::vector<int> q{0, 1, 2};
  const auto g = groupoids::units_only(k);
  Table act(k, std::vector<int>(k, -1));
  for (int m = 0; m < k; ++m)
    act[m][m] = m;
  const auto fp = fiber_product_rackoid(q, g, act);
  EXPECT_EQ(fp.rackoid.pc.arrows, k);
  EXPECT_FALSE(fp.rackoid.pc.unital());
  for (const auto &row : fp.rackoid.op)
    for (int x = 0; x < k; ++x)
      EXPECT_EQ(row[x], x);
  EXPECT_TRUE(check_rackoid(fp.rackoid, false).valid);
}

using instances::z2_torsor;

TEST(FiberProduct, Z2TorsorGivesRackoidOnFourKElements) {
  for (int k = 1; k <= 3; ++k) {
    const auto d = z2_torsor(k);
    ASSERT_TRUE(validate(d.g).valid);
    const auto fp = fiber_product_rackoid(d.q, d.g, d.act);
    EXPECT_EQ(fp.rackoid.pc.arrows, 4 * k);
    const auto rep = check_rackoid(fp.rackoid, false);
    EXPECT_TRUE(rep.valid) << k;
    // p(y1, y2) moves y2 to y1.
    for (std::size_t x = 0; x < fp.pairs.size(); ++x)
      EXPECT_EQ(d.act[fp.p[x]][fp.pairs[x].second], fp.pairs[x].first);
  }
}

TEST(FiberProduct, NonFreeAndNonTransitiveRejected) {
  const int k = 2;
  // Z2 acting trivially on singleton fibers: not free.
  {
    const auto g = groupoids::product(groupoids::pair(k), z2_over_point());
    std::vector<int> q{0, 1};
    Table act(g.arrows(), std::vector<int>(k, -1));
    for (int arrow = 0; arrow < g.arrows(); ++arrow)
      act[arrow][arrow / 2 / k] = arrow / 2 % k;
    try {
      fiber_product_rackoid(q, g, act);
      FAIL();
    } catch (const HypothesisError &e) {
      EXPECT_EQ(e.rule(), "free");
    }
  }
  // Trivial isotropy on two-point fibers: not transitive.
  {
    const auto g = groupoids::pair(k);
    std::vector<int> q{0, 0, 1, 1};
    Table act(g.arrows(), std::vector<int>(2 * k, -1));
    for (int arrow = 0; arrow < g.arrows(); ++arrow)
      for (int i = 0; i < 2; ++i)
        act[arrow][2 * (arrow / k) + i] = 2 * (arrow % k) + i;
    try {
      fiber_product_rackoid(q, g, act);
      FAIL();
    } catch (const HypothesisError &e) {
      EXPECT_EQ(e.rule(), "transitive");
      EXPECT_EQ(e.witness().size(), 3u);
    }
  }
}
