#pragma once

// The one-parameter family of racks ▷_t on R⁴ integrating g_t, checked
// symbolically with exact rational polynomials.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "leibniz.hpp"
#include "polynomial.hpp"
#include "report.hpp"

namespace rackworks {

template <class T> using Vec4 = std::array<T, 4>;

/// a ▷_t b = (b1, b2, b3, t(a1b1+a2b2+a3b3) + a1b2 − a2b1 + b4).
template <class T> Vec4<T> covez_op(const T &t, const Vec4<T> &a, const Vec4<T> &b) {
  return {b[0], b[1], b[2],
          t * (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) + a[0] * b[1] -
              a[1] * b[0] + b[3]};
}

/// Inverse of b ↦ a ▷_t b.
template <class T>
Vec4<T> covez_op_inverse(const T &t, const Vec4<T> &a, const Vec4<T> &b) {
  return {b[0], b[1], b[2],
          b[3] - t * (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) - a[0] * b[1] +
              a[1] * b[0]};
}

/// (a1+b1, a2+b2, a3+b3, a4+b4+a1b2).
template <class T> Vec4<T> covez_group_mul(const Vec4<T> &a, const Vec4<T> &b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3] + a[0] * b[1]};
}

template <class T> Vec4<T> covez_group_inv(const Vec4<T> &a) {
  return {-a[0], -a[1], -a[2], -a[3] + a[0] * a[1]};
}

namespace detail {

struct CovezRing {
  static constexpr int kVars = 13; // t, a1..a4, b1..b4, c1..c4

  static const std::vector<std::string> &names() {
    static const std::vector<std::string> n{"t",  "a1", "a2", "a3", "a4",
                                            "b1", "b2", "b3", "b4", "c1",
                                            "c2", "c3", "c4"};
    return n;
  }

  static Polynomial var(int i) { return Polynomial::variable(kVars, i); }
  static Polynomial zero() { return Polynomial(kVars); }

  static Vec4<Polynomial> vec(int first) {
    return {var(first), var(first + 1), var(first + 2), var(first + 3)};
  }

  static Vec4<Polynomial> zeros() { return {zero(), zero(), zero(), zero()}; }
};

inline void compare_vec(Report &r, const std::string &name,
                        const Vec4<Polynomial> &lhs, const Vec4<Polynomial> &rhs) {
  std::string detail;
  for (int k = 0; k < 4 && detail.empty(); ++k) {
    const auto d = first_difference(lhs[k], rhs[k], CovezRing::names());
    if (!d.empty())
      detail = "component " + std::to_string(k + 1) + ": " + d;
  }
  r.add(name, detail.empty(), detail);
}

} // namespace detail

/// Self-distributivity, both inverse compositions and pointedness at 0, each
/// as a coefficientwise polynomial identity in t, a, b, c.
inline Report verify_covez_identity() {
  using R = detail::CovezRing;
  Stopwatch clock;
  Report r;
  r.title = "covez verify";
  const Polynomial t = R::var(0);
  const auto a = R::vec(1), b = R::vec(5), c = R::vec(9);

  const auto lhs = covez_op(t, a, covez_op(t, b, c));
  const auto rhs = covez_op(t, covez_op(t, a, b), covez_op(t, a, c));
  detail::compare_vec(r, "self-distributive", lhs, rhs);
  detail::compare_vec(r, "inverse-after-op", covez_op_inverse(t, a, covez_op(t, a, b)), b);
  detail::compare_vec(r, "op-after-inverse", covez_op(t, a, covez_op_inverse(t, a, b)), b);
  detail::compare_vec(r, "pointed-right", covez_op(t, a, R::zeros()), R::zeros());
  detail::compare_vec(r, "pointed-left", covez_op(t, R::zeros(), b), b);
  r.time_ms = clock.ms();
  return r;
}

/// [e_i, e_j]_k = ∂_s ∂_r of component k of (s e_i) ▷_t (r e_j) at s = r = 0,
/// i.e. the bilinear part of ▷_t.
inline LeibnizStructure<Rational> covez_tangent_bracket(const Rational &t) {
  constexpr int kS = 0, kR = 1;
  LeibnizStructure<Rational> out(4);
  const Polynomial tp = Polynomial::constant(2, t);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Vec4<Polynomial> x, y;
      for (int k = 0; k < 4; ++k) {
        x[k] = k == i ? Polynomial::variable(2, kS) : Polynomial(2);
        y[k] = k == j ? Polynomial::variable(2, kR) : Polynomial(2);
      }
      const auto z = covez_op(tp, x, y);
      for (int k = 0; k < 4; ++k)
        out.at(i, j, k) = z[k].derivative(kS).derivative(kR).substitute(kS, 0).substitute(kR, 0).coefficient({0, 0});
    }
  return out;
}

/// Group axioms of covez_group_mul and a·b·a⁻¹ = a ▷_0 b.
inline Report covez_group_check() {
  using R = detail::CovezRing;
  Stopwatch clock;
  Report r;
  r.title = "covez group";
  const auto a = R::vec(1), b = R::vec(5), c = R::vec(9);
  const auto zero = R::zeros();
  detail::compare_vec(r, "associativity",
                      covez_group_mul(covez_group_mul(a, b), c),
                      covez_group_mul(a, covez_group_mul(b, c)));
  detail::compare_vec(r, "left-unit", covez_group_mul(zero, a), a);
  detail::compare_vec(r, "right-unit", covez_group_mul(a, zero), a);
  detail::compare_vec(r, "right-inverse", covez_group_mul(a, covez_group_inv(a)), zero);
  detail::compare_vec(r, "left-inverse", covez_group_mul(covez_group_inv(a), a), zero);
  detail::compare_vec(r, "conjugation-is-op-at-0",
                      covez_group_mul(covez_group_mul(a, b), covez_group_inv(a)),
                      covez_op(R::zero(), a, b));
  r.time_ms = clock.ms();
  return r;
}

/// For each t: the tangent bracket is a Leibniz algebra, and it is
/// antisymmetric exactly when t = 0. A Lie fiber next to a non-Lie fiber
/// shows the fibers are not all isomorphic.
inline Report bundle_nontriviality_witness(const std::vector<Rational> &sample) {
  bool hasZero = false, hasNonzero = false;
  for (const auto &t : sample)
    (t == 0 ? hasZero : hasNonzero) = true;
  if (!hasZero || !hasNonzero)
    throw InputError("covez nontrivial: sample must contain 0 and a nonzero t");
  Stopwatch clock;
  Report r;
  r.title = "covez nontrivial";
  bool sawLie = false, sawNonLie = false;
  for (const auto &t : sample) {
    const auto bracket = covez_tangent_bracket(t);
    const auto lr = check_leibniz(bracket);
    r.add("t=" + t.str() + " leibniz", lr.valid);
    const bool anti = lr.antisymmetric;
    (anti ? sawLie : sawNonLie) = true;
    std::string detail = anti ? "antisymmetric" : "not antisymmetric";
    if (!anti)
      for (int i = 0; i < 4; ++i)
        if (bracket.at(i, i, 3) != 0) {
          detail += ", [e" + std::to_string(i + 1) + ",e" + std::to_string(i + 1) +
                    "] = " + bracket.at(i, i, 3).str() + "*e4";
          break;
        }
    r.add("t=" + t.str() + " antisymmetric iff t=0", anti == (t == 0), detail);
  }
  r.add("fiber type non-constant", sawLie && sawNonLie);
  r.time_ms = clock.ms();
  return r;
}

/// Float rack test of ▷_t at random triples: self-distributivity, inverse
/// and pointedness at 0, as a maximum residual.
inline double covez_sampled_residual(double t, Rng &rng, int triples) {
  auto draw = [&] {
    Vec4<double> v;
    for (auto &x : v)
      x = rng.uniform(-2.0, 2.0);
    return v;
  };
  double worst = 0;
  auto note = [&](const Vec4<double> &x, const Vec4<double> &y) {
    for (int k = 0; k < 4; ++k)
      worst = std::max(worst, std::abs(x[k] - y[k]));
  };
  const Vec4<double> zero{0, 0, 0, 0};
  for (int i = 0; i < triples; ++i) {
    const auto a = draw(), b = draw(), c = draw();
    note(covez_op(t, a, covez_op(t, b, c)),
         covez_op(t, covez_op(t, a, b), covez_op(t, a, c)));
    note(covez_op_inverse(t, a, covez_op(t, a, b)), b);
    note(covez_op(t, zero, b), b);
    note(covez_op(t, a, zero), zero);
  }
  return worst;
}

} // namespace rackworks
