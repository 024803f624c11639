#include <gtest/gtest.h>

#include <rackworks/covez.hpp>

using namespace rackworks;

namespace {

const std::vector<Rational> kSample{Rational(0), Rational(1), Rational(-2), Rational(3, 7)};

Rational random_rational(Rng &rng) {
  return Rational(static_cast<long>(rng.below(41)) - 20, static_cast<long>(rng.below(9)) + 1);
}

Vec4<Rational> random_vec(Rng &rng) {
  return {random_rational(rng), random_rational(rng), random_rational(rng),
          random_rational(rng)};
}

Vec4<Rational> e(int i) {
  Vec4<Rational> v{0, 0, 0, 0};
  v[i] = 1;
  return v;
}

bool all_pass(const Report &r) {
  for (const auto &c : r.checks)
    if (c.status != Status::Pass)
      return false;
  return !r.checks.empty();
}

} // namespace

TEST(Polynomial, ArithmeticAndEvaluation) {
  const auto x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  const auto p = (x + y) * (x - y);
  EXPECT_EQ(p, x * x - y * y);
  EXPECT_EQ(p.terms().size(), 2u);
  EXPECT_EQ(p.evaluate({Rational(3), Rational(1, 2)}), Rational(35, 4));
  EXPECT_EQ(p.derivative(0), Rational(2) * x);
  EXPECT_EQ(p.substitute(1, 2), x * x - Polynomial::constant(2, 4));
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(first_difference(p, p, {"x", "y"}), "");
  EXPECT_NE(first_difference(p, x * x, {"x", "y"}).find("y^2"), std::string::npos);
}

TEST(CovezOp, Formula) {
  for (const auto &t : kSample) {
    const Vec4<Rational> zero{0, 0, 0, 0};
    const Vec4<Rational> b{1, 2, 3, 4};
    EXPECT_EQ(covez_op(t, zero, b), b);
    EXPECT_EQ(covez_op(t, b, zero), zero);
  }
  EXPECT_EQ(covez_op(Rational(1), e(0), e(1)), (Vec4<Rational>{0, 1, 0, 1}));
  const Vec4<Rational> a{1, 2, 3, 4}, b{5, 6, 7, 8};
  // t(5 + 12 + 21) + 1*6 − 2*5 + 8 at t = 3/7.
  EXPECT_EQ(covez_op(Rational(3, 7), a, b)[3], Rational(3, 7) * 38 + 6 - 10 + 8);
}

TEST(CovezIdentity, PolynomialIdentitiesHold) {
  const auto r = verify_covez_identity();
  EXPECT_TRUE(all_pass(r)) << r.to_text();
  EXPECT_EQ(r.checks.size(), 5u);
}

TEST(CovezIdentity, AgreesWithExactEvaluationAtRandomPoints) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Rational t = random_rational(rng);
    const auto a = random_vec(rng), b = random_vec(rng), c = random_vec(rng);
    EXPECT_EQ(covez_op(t, a, covez_op(t, b, c)),
              covez_op(t, covez_op(t, a, b), covez_op(t, a, c)));
    EXPECT_EQ(covez_op_inverse(t, a, covez_op(t, a, b)), b);
    EXPECT_EQ(covez_op(t, a, covez_op_inverse(t, a, b)), b);
  }
}

TEST(CovezIdentity, ExpandedSidesMatchPointEvaluation) {
  // The polynomial engine and plain rational evaluation agree on both sides.
  const int nv = 13;
  auto var = [&](int i) { return Polynomial::variable(nv, i); };
  const Vec4<Polynomial> A{var(1), var(2), var(3), var(4)}, B{var(5), var(6), var(7), var(8)},
      C{var(9), var(10), var(11), var(12)};
  const auto lhs = covez_op(var(0), A, covez_op(var(0), B, C));
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> x(nv);
    for (auto &v : x)
      v = random_rational(rng);
    const Vec4<Rational> a{x[1], x[2], x[3], x[4]}, b{x[5], x[6], x[7], x[8]},
        c{x[9], x[10], x[11], x[12]};
    const auto direct = covez_op(x[0], a, covez_op(x[0], b, c));
    for (int k = 0; k < 4; ++k)
      EXPECT_EQ(lhs[k].evaluate(x), direct[k]);
  }
}

TEST(CovezIdentity, BrokenFormulaIsCaught) {
  // Dropping the b4 term destroys the inverse; the polynomial comparison
  // names the offending monomial.
  const int nv = 13;
  auto var = [&](int i) { return Polynomial::variable(nv, i); };
  const Vec4<Polynomial> A{var(1), var(2), var(3), var(4)}, B{var(5), var(6), var(7), var(8)};
  auto broken = covez_op(var(0), A, B);
  broken[3] = broken[3] - B[3] + Rational(2) * B[3];
  const auto d = first_difference(broken[3], covez_op(var(0), A, B)[3],
                                  detail::CovezRing::names());
  EXPECT_NE(d.find("b4"), std::string::npos) << d;
}

TEST(CovezBracket, EqualsCovezLeibniz) {
  for (const auto &t : kSample)
    EXPECT_EQ(covez_tangent_bracket(t), covez_leibniz(t)) << t;
}

TEST(CovezBracket, NamedEntries) {
  for (const auto &t : kSample) {
    const auto s = covez_tangent_bracket(t);
    EXPECT_EQ(s.at(0, 1, 3), 1);
    EXPECT_EQ(s.at(0, 0, 3), t);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        EXPECT_EQ(s.at(3, j, k), 0);
  }
}

TEST(CovezBracket, MatchesDifferenceQuotientOfFormula) {
  // ▷_t is bilinear in (a, b) modulo the b-linear identity part, so the
  // mixed second difference at step 1 is exact.
  for (const auto &t : kSample)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const Vec4<Rational> zero{0, 0, 0, 0};
        const auto f11 = covez_op(t, e(i), e(j));
        const auto f01 = covez_op(t, zero, e(j));
        const auto f10 = covez_op(t, e(i), zero);
        const auto f00 = covez_op(t, zero, zero);
        const auto s = covez_leibniz(t);
        for (int k = 0; k < 4; ++k)
          EXPECT_EQ(f11[k] - f01[k] - f10[k] + f00[k], s.at(i, j, k));
      }
}

TEST(CovezGroup, ChecksPass) {
  const auto r = covez_group_check();
  EXPECT_TRUE(all_pass(r)) << r.to_text();
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_vec(rng), b = random_vec(rng);
    EXPECT_EQ(covez_group_mul(covez_group_mul(a, b), covez_group_inv(a)),
              covez_op(Rational(0), a, b));
    EXPECT_EQ(covez_group_mul(a, covez_group_inv(a)), (Vec4<Rational>{0, 0, 0, 0}));
  }
}

TEST(CovezNontrivial, AntisymmetricIffZero) {
  const auto r = bundle_nontriviality_witness(kSample);
  EXPECT_TRUE(all_pass(r)) << r.to_text();
  for (const auto &t : kSample)
    EXPECT_EQ(check_leibniz(covez_tangent_bracket(t)).antisymmetric, t == 0);
  EXPECT_NE(r.to_text().find("[e1,e1] = 1*e4"), std::string::npos) << r.to_text();
}

TEST(CovezNontrivial, SampleMustContainZeroAndNonzero) {
  EXPECT_THROW(bundle_nontriviality_witness({Rational(1), Rational(2)}), InputError);
  EXPECT_THROW(bundle_nontriviality_witness({Rational(0)}), InputError);
}

TEST(CovezSampled, FloatRackCheckEveryFiber) {
  Rng rng(2024);
  for (double t : {0.0, 1.0, -2.0, 3.0 / 7.0, 0.5, -1.25})
    EXPECT_LT(covez_sampled_residual(t, rng, 50), 1e-12) << t;
}

TEST(CovezSampled, Reproducible) {
  Rng a(77), b(77);
  EXPECT_EQ(covez_sampled_residual(0.3, a, 50), covez_sampled_residual(0.3, b, 50));
}
