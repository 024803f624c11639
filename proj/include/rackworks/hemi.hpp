#pragma once

// The hemisemidirect rackoid on Γ = T*M × M over M = Rⁿ.
//
// An arrow (α, n) sits over source m with α ∈ T*_m M and target n.
// A bisection is (ω, φ): a 1-form and a diffeomorphism, its arrow at m being
// (ω_m, φ(m)). The action discards the acting form:
//
//   (ω,φ) ▷ (α,n) = ((φ⁻¹)*α, φ(n))          on arrows
//   (η,ψ) ▷ (ω,φ) = ((ψ⁻¹)*ω, ψ∘φ∘ψ⁻¹)        on bisections
//
// Differentiating twice at the units recovers [X+α, Y+β] = [X,Y] + L_X β.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "flow.hpp"
#include "report.hpp"

namespace rackworks {

/// 1-form scale·(D⁻¹)*ω: the expression form ω pushed forward along D.
struct FormField {
  std::vector<Expr> coeffs;
  double scale = 1;
  Diffeo pushed;

  static FormField of(std::vector<Expr> c, double scale = 1) {
    const int n = static_cast<int>(c.size());
    return {std::move(c), scale, Diffeo::identity(n)};
  }

  int dim() const { return static_cast<int>(coeffs.size()); }

  std::vector<double> at(const std::vector<double> &p) const {
    auto v = pushed.is_identity() ? eval_all(coeffs, p) : pullback_oneform(pushed, coeffs, p);
    for (auto &c : v)
      c *= scale;
    return v;
  }

  /// (ψ⁻¹)* of this form.
  FormField pushed_by(const Diffeo &psi) const { return {coeffs, scale, then(pushed, psi)}; }
};

struct HemiElement {
  std::vector<double> m;     // source
  std::vector<double> alpha; // covector at m
  std::vector<double> nTarget;

  static HemiElement unit(const std::vector<double> &m) {
    return {m, std::vector<double>(m.size(), 0.0), m};
  }

  friend bool operator==(const HemiElement &, const HemiElement &) = default;
};

struct HemiBisection {
  FormField omega;
  Diffeo phi;

  static HemiBisection identity(int n) {
    return {FormField::of(expr::zeros(n)), Diffeo::identity(n)};
  }
  static HemiBisection of(std::vector<Expr> omega, const FlowDiffeo &f) {
    return {FormField::of(std::move(omega)), Diffeo::of(f)};
  }

  int dim() const { return phi.n; }

  /// The arrow of the bisection with source m.
  HemiElement arrow_at(const std::vector<double> &m) const { return {m, omega.at(m), phi(m)}; }
};

/// Section of ker Ts: a vector field X and a 1-form β.
struct SectionA {
  std::vector<Expr> X;
  std::vector<Expr> beta;

  int dim() const { return static_cast<int>(X.size()); }

  template <class T>
  std::pair<std::vector<T>, std::vector<T>> eval(const std::vector<T> &x) const {
    return {eval_all(X, x), eval_all(beta, x)};
  }

  static SectionA parse(const std::string &X, const std::string &beta, int n) {
    return {parse_expr_list(X, n), parse_expr_list(beta, n)};
  }
};

namespace detail {

inline void require_dim(std::size_t got, int n, const char *what) {
  if (static_cast<int>(got) != n)
    throw InputError(std::string(what) + ": dimension " + std::to_string(got) +
                     " does not match " + std::to_string(n));
}

inline void require_element(const HemiElement &e, int n) {
  require_dim(e.m.size(), n, "element source");
  require_dim(e.alpha.size(), n, "element covector");
  require_dim(e.nTarget.size(), n, "element target");
}

inline void require_section(const SectionA &a) {
  if (a.X.empty() || a.X.size() != a.beta.size())
    throw InputError("section: vector field and form must have the same positive dimension");
}

inline double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
  double r = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

inline double element_distance(const HemiElement &a, const HemiElement &b) {
  return std::max({max_abs_diff(a.m, b.m), max_abs_diff(a.alpha, b.alpha),
                   max_abs_diff(a.nTarget, b.nTarget)});
}

inline std::string vec_string(const std::vector<double> &v) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i)
    os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

} // namespace detail

inline HemiElement hemi_op(const HemiBisection &b, const HemiElement &e) {
  detail::require_element(e, b.dim());
  const auto m = b.phi(e.m);
  return {m, pullback_covector(b.phi, e.alpha, m), b.phi(e.nTarget)};
}

inline HemiBisection hemi_bisection_op(const HemiBisection &eta_psi,
                                       const HemiBisection &omega_phi) {
  if (eta_psi.dim() != omega_phi.dim())
    throw InputError("bisection dimensions differ");
  return {omega_phi.omega.pushed_by(eta_psi.phi), conjugate_diffeo(eta_psi.phi, omega_phi.phi)};
}

/// Indices into a catalog (sigma, tau, rho) and an element list.
struct HemiTriple {
  std::size_t sigma = 0, tau = 0, rho = 0, element = 0;
};

inline std::vector<HemiTriple> sample_triples(Rng &rng, std::size_t catalog, std::size_t elements,
                                              std::size_t count) {
  if (catalog == 0 || elements == 0)
    throw InputError("sample_triples: empty catalog or element list");
  std::vector<HemiTriple> out(count);
  for (auto &t : out) {
    t.sigma = rng.below(catalog);
    t.tau = rng.below(catalog);
    t.rho = rng.below(catalog);
    t.element = rng.below(elements);
  }
  return out;
}

/// max over triples of |Σ▷(T▷γ) − (Σ▷T)▷(Σ▷γ)|∞, with the worst triple.
struct SdResidual {
  double residual = 0;
  HemiTriple worst;
};

inline SdResidual hemi_sd_residual(const std::vector<HemiBisection> &catalog,
                                   const std::vector<HemiElement> &elements,
                                   const std::vector<HemiTriple> &triples) {
  SdResidual out;
  for (const auto &t : triples) {
    const auto &S = catalog.at(t.sigma);
    const auto &T = catalog.at(t.tau);
    const auto &g = elements.at(t.element);
    const auto lhs = hemi_op(S, hemi_op(T, g));
    const auto rhs = hemi_op(hemi_bisection_op(S, T), hemi_op(S, g));
    const double r = detail::element_distance(lhs, rhs);
    if (r > out.residual) {
      out.residual = r;
      out.worst = t;
    }
  }
  return out;
}

/// Copy of the catalog with every flow re-integrated at the given resolution.
inline std::vector<HemiBisection> with_steps(std::vector<HemiBisection> catalog, int steps) {
  for (auto &b : catalog) {
    for (auto &f : b.phi.chain)
      f.steps_per_unit = steps;
    for (auto &f : b.omega.pushed.chain)
      f.steps_per_unit = steps;
  }
  return catalog;
}

/// Sampled rackoid axioms on the catalog. Each line reports its max residual;
/// failures name the worst witness.
inline Report check_hemi_axioms(const std::vector<HemiBisection> &catalog,
                                const std::vector<HemiElement> &elements,
                                const std::vector<HemiTriple> &triples, double tol) {
  if (catalog.empty())
    throw InputError("hemi catalog is empty");
  if (elements.empty())
    throw InputError("hemi element list is empty");
  const int n = catalog.front().dim();
  for (const auto &b : catalog)
    if (b.dim() != n || b.omega.dim() != n)
      throw InputError("hemi catalog mixes dimensions");
  for (const auto &e : elements)
    detail::require_element(e, n);

  Stopwatch clock;
  Report r;
  r.title = "hemi rackoid axioms";
  auto triple_string = [](const HemiTriple &t) {
    return "sigma=" + std::to_string(t.sigma) + " tau=" + std::to_string(t.tau) +
           " rho=" + std::to_string(t.rho) + " element=" + std::to_string(t.element);
  };

  const auto sd = hemi_sd_residual(catalog, elements, triples);
  r.add("self-distributive (arrows)", sd.residual <= tol,
        sd.residual > 0 ? "worst " + triple_string(sd.worst) : "", sd.residual);

  // Σ▷(T▷R) = (Σ▷T)▷(Σ▷R) as bisections, compared through their arrows.
  double bres = 0;
  HemiTriple bworst;
  for (const auto &t : triples) {
    const auto &S = catalog.at(t.sigma);
    const auto &T = catalog.at(t.tau);
    const auto &R = catalog.at(t.rho);
    const auto &m = elements.at(t.element).m;
    const auto lhs = hemi_bisection_op(S, hemi_bisection_op(T, R)).arrow_at(m);
    const auto rhs =
        hemi_bisection_op(hemi_bisection_op(S, T), hemi_bisection_op(S, R)).arrow_at(m);
    const double d = detail::element_distance(lhs, rhs);
    if (d > bres) {
      bres = d;
      bworst = t;
    }
  }
  r.add("self-distributive (bisections)", bres <= tol,
        bres > 0 ? "worst " + triple_string(bworst) : "", bres);

  // s(Σ▷γ) = σ̲(s γ), t(Σ▷γ) = σ̲(t γ): pull both ends back through σ̲⁻¹ and
  // the covector back through Tσ̲; this also inverts Σ▷.
  double cres = 0, bijres = 0;
  std::string cworst, bijworst;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto inv = catalog[i].phi.inverse();
    for (std::size_t k = 0; k < elements.size(); ++k) {
      const auto &g = elements[k];
      const auto img = hemi_op(catalog[i], g);
      const double c = std::max(detail::max_abs_diff(inv(img.m), g.m),
                                detail::max_abs_diff(inv(img.nTarget), g.nTarget));
      if (c > cres) {
        cres = c;
        cworst = "sigma=" + std::to_string(i) + " element=" + std::to_string(k);
      }
      const HemiBisection back{catalog[i].omega, inv};
      const double bj = detail::element_distance(hemi_op(back, img), g);
      if (bj > bijres) {
        bijres = bj;
        bijworst = "sigma=" + std::to_string(i) + " element=" + std::to_string(k);
      }
    }
  }
  r.add("compatibility", cres <= tol, cworst, cres);
  r.add("bijective", bijres <= tol, bijworst, bijres);

  // 1_M▷γ = γ and Σ▷1_m = 1_{σ̲(m)}.
  const auto id = HemiBisection::identity(n);
  double u1 = 0, u2 = 0;
  for (const auto &g : elements)
    u1 = std::max(u1, detail::element_distance(hemi_op(id, g), g));
  for (const auto &b : catalog)
    for (const auto &g : elements) {
      const auto img = hemi_op(b, HemiElement::unit(g.m));
      u2 = std::max(u2, detail::element_distance(img, HemiElement::unit(img.m)));
    }
  r.add("unit-acts-trivially", u1 <= tol, "", u1);
  r.add("unit-preserved", u2 <= tol, "", u2);

  r.extra["samples"] = triples.size();
  r.extra["max_residual"] = std::max({sd.residual, bres, cres, bijres, u1, u2});
  r.time_ms = clock.ms();
  return r;
}

/// Vector part and covector part of a section value.
struct SectionValue {
  std::vector<double> vec;
  std::vector<double> covec;
};

/// [b, a] = [X,Y] + L_X β as a section, evaluable at any dual depth, so
/// brackets nest.
template <class B, class A> struct BracketOf {
  B b;
  A a;

  int dim() const { return b.dim(); }

  template <class T>
  std::pair<std::vector<T>, std::vector<T>> eval(const std::vector<T> &x) const {
    const auto xs = seed(x);
    const auto [X, alpha] = b.eval(xs);
    const auto [Y, beta] = a.eval(xs);
    (void)alpha;
    const std::size_t n = x.size();
    std::vector<T> vec(n, T(0.0)), cov(n, T(0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        vec[i] = vec[i] + X[j].v * Y[i].d[j] - Y[j].v * X[i].d[j];
        cov[i] = cov[i] + X[j].v * beta[i].d[j] + beta[j].v * X[j].d[i];
      }
    return {vec, cov};
  }
};

template <class B, class A> BracketOf<B, A> bracket_of(B b, A a) { return {std::move(b), std::move(a)}; }

/// Coordinate oracle: ([X,Y], L_X β) at p, where b = (X, α) and a = (Y, β).
template <class B, class A>
SectionValue lie_oracle(const B &b, const A &a, const std::vector<double> &p) {
  const auto [v, c] = BracketOf<B, A>{b, a}.eval(p);
  return {v, c};
}

namespace detail {

/// (φ(p) − p, ω_p) for a bisection: its arrow at p in displacement form.
inline std::vector<double> arrow_offset(const HemiBisection &b, const std::vector<double> &p) {
  auto out = b.phi.displacement(p);
  const auto w = b.omega.at(p);
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

inline HemiBisection family(const std::vector<Expr> &field, const std::vector<Expr> &form,
                            double s, int steps) {
  return {FormField::of(form, s), Diffeo::of(FlowDiffeo{field, s, steps})};
}

} // namespace detail

struct BracketResult {
  SectionValue value;
  double error_estimate = 0; // |Richardson correction|∞
};

/// −∂²/∂u∂v|₀ of (Σ_u ▷ T_v) at p, where Σ_u = (uα, flow of X for time u) and
/// T_v = (vβ, flow of Y for time v). Nested central differences with spacing
/// h, Richardson-extrapolated against 2h; a third level 4h checks that the
/// difference ratio matches O(h²) truncation. steps is RK4 steps per unit time.
inline BracketResult hemi_bracket(const SectionA &b, const SectionA &a,
                                  const std::vector<double> &p, double h = 1e-3,
                                  int steps = kDefaultStepsPerUnit) {
  detail::require_section(b);
  detail::require_section(a);
  if (b.dim() != a.dim())
    throw InputError("bracket: sections of different dimension");
  detail::require_dim(p.size(), b.dim(), "bracket point");
  if (!(h > 0) || !std::isfinite(h))
    throw InputError("bracket: step h must be positive");
  if (steps < 1)
    throw InputError("bracket: steps must be positive");

  const std::size_t n = p.size();
  double scale = 0;
  auto D = [&](double u, double v) {
    // α never enters: the acting form is discarded by ▷.
    const auto S = detail::family(b.X, expr::zeros(b.dim()), u, steps);
    const auto T = detail::family(a.X, a.beta, v, steps);
    auto d = detail::arrow_offset(hemi_bisection_op(S, T), p);
    for (double c : d)
      scale = std::max(scale, std::abs(c));
    return d;
  };
  auto stencil = [&](double k) {
    const auto pp = D(k, k), mp = D(-k, k), pm = D(k, -k), mm = D(-k, -k);
    std::vector<double> out(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i)
      out[i] = -((pp[i] - mp[i]) - (pm[i] - mm[i])) / (4 * k * k);
    return out;
  };
  const auto m1 = stencil(h), m2 = stencil(2 * h), m4 = stencil(4 * h);

  BracketResult res;
  std::vector<double> r(2 * n);
  double rmax = 0;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    r[i] = (4 * m1[i] - m2[i]) / 3;
    rmax = std::max(rmax, std::abs(r[i]));
    res.error_estimate = std::max(res.error_estimate, std::abs(m1[i] - m2[i]) / 3);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor = 1e3 * eps * (scale + h * (1 + detail::max_abs_diff(p, std::vector<double>(n, 0.0)))) / (h * h);
  if (floor > 1e-2 * (1 + rmax))
    throw NumericError("bracket: step h=" + std::to_string(h) +
                       " too small, rounding floor " + std::to_string(floor) + " dominates");
  for (std::size_t i = 0; i < 2 * n; ++i)
    if (std::abs(m1[i] - m2[i]) > 10 * std::abs(m2[i] - m4[i]) / 4 + floor)
      throw NumericError("bracket: Richardson pair disagrees with predicted O(h^2) "
                         "truncation (component " +
                         std::to_string(i) + "); catastrophic cancellation suspected");
  res.value.vec.assign(r.begin(), r.begin() + n);
  res.value.covec.assign(r.begin() + n, r.end());
  return res;
}

namespace detail {

/// ∂_v|₀ of an arrow-valued family at p: central difference, Richardson.
template <class F> std::vector<double> ddv(F &&family_at, double h) {
  const auto a = family_at(h), b = family_at(-h), c = family_at(2 * h), d = family_at(-2 * h);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d1 = (a[i] - b[i]) / (2 * h), d2 = (c[i] - d[i]) / (4 * h);
    out[i] = (4 * d1 - d2) / 3;
  }
  return out;
}

inline SectionA times(const Expr &f, const SectionA &a) {
  return {expr::times(f, a.X), expr::times(f, a.beta)};
}

} // namespace detail

/// Ad_Σ a at p: ∂_v|₀ (Σ ▷ A_v) with A_v = (vβ, flow of Y for time v).
inline SectionValue hemi_ad(const HemiBisection &S, const SectionA &a, const std::vector<double> &p,
                            double h = 1e-3, int steps = kDefaultStepsPerUnit) {
  const auto d = detail::ddv(
      [&](double v) {
        return detail::arrow_offset(hemi_bisection_op(S, detail::family(a.X, a.beta, v, steps)),
                                    p);
      },
      h);
  const std::size_t n = p.size();
  return {{d.begin(), d.begin() + n}, {d.begin() + n, d.end()}};
}

/// Numerical adjoint and anchor identities at the given points:
///   (i)   Ad_Σ(f a) = (σ̲⁻¹)*f · Ad_Σ a
///   (ii)  ∂_v Σ▷(T▷A_v) = ∂_v (Σ▷T)▷(Σ▷A_v)
///   (iii) [b, f a] = f [b, a] + (ρ(b) f) a,   ρ(b) = X_b
inline Report check_ad_identities(const HemiBisection &S, const HemiBisection &T,
                                  const SectionA &b, const SectionA &a, const Expr &f,
                                  const std::vector<std::vector<double>> &points, double tol,
                                  double h = 1e-3, int steps = kDefaultStepsPerUnit) {
  detail::require_section(a);
  detail::require_section(b);
  const int n = a.dim();
  if (S.dim() != n || T.dim() != n || b.dim() != n)
    throw InputError("ad-check: dimension mismatch");
  if (points.empty())
    throw InputError("ad-check: no sample points");
  for (const auto &p : points)
    detail::require_dim(p.size(), n, "ad-check point");

  Stopwatch clock;
  Report r;
  r.title = "hemi adjoint identities";
  const auto fa = detail::times(f, a);
  const auto Sinv = S.phi.inverse();
  auto worst = [](double &acc, std::string &w, double v, const std::vector<double> &p) {
    if (v > acc) {
      acc = v;
      w = "point " + detail::vec_string(p);
    }
  };

  double r1 = 0, r2 = 0, r3 = 0;
  std::string w1, w2, w3;
  for (const auto &p : points) {
    // (i)
    const auto lhs = hemi_ad(S, fa, p, h, steps);
    const auto base = hemi_ad(S, a, p, h, steps);
    const double fq = f.eval(Sinv(p));
    double d = 0;
    for (int i = 0; i < n; ++i)
      d = std::max({d, std::abs(lhs.vec[i] - fq * base.vec[i]),
                    std::abs(lhs.covec[i] - fq * base.covec[i])});
    worst(r1, w1, d, p);

    // (ii)
    const auto ST = hemi_bisection_op(S, T);
    const auto left = detail::ddv(
        [&](double v) {
          const auto Av = detail::family(a.X, a.beta, v, steps);
          return detail::arrow_offset(hemi_bisection_op(S, hemi_bisection_op(T, Av)), p);
        },
        h);
    const auto right = detail::ddv(
        [&](double v) {
          const auto Av = detail::family(a.X, a.beta, v, steps);
          return detail::arrow_offset(hemi_bisection_op(ST, hemi_bisection_op(S, Av)), p);
        },
        h);
    worst(r2, w2, detail::max_abs_diff(left, right), p);

    // (iii)
    const auto bfa = hemi_bracket(b, fa, p, h, steps).value;
    const auto ba = hemi_bracket(b, a, p, h, steps).value;
    const auto grad = f.eval(seed(p));
    const auto Xb = eval_all(b.X, p);
    double rho_f = 0;
    for (int j = 0; j < n; ++j)
      rho_f += Xb[j] * grad.d[j];
    const auto Y = eval_all(a.X, p), beta = eval_all(a.beta, p);
    const double fp = grad.v;
    double e = 0;
    for (int i = 0; i < n; ++i)
      e = std::max({e, std::abs(bfa.vec[i] - (fp * ba.vec[i] + rho_f * Y[i])),
                    std::abs(bfa.covec[i] - (fp * ba.covec[i] + rho_f * beta[i]))});
    worst(r3, w3, e, p);
  }
  r.add("ad-function-multiple", r1 <= tol, r1 > tol ? w1 : "", r1);
  r.add("ad-composition", r2 <= tol, r2 > tol ? w2 : "", r2);
  r.add("anchor-rule", r3 <= tol, r3 > tol ? w3 : "", r3);
  r.extra["points"] = points.size();
  r.time_ms = clock.ms();
  return r;
}

/// Fixed catalogs of globally Lipschitz fields.
namespace hemi_catalog {

/// n = 2, sin/tanh/cos/polynomial fields with times of both signs.
inline std::vector<HemiBisection> mixed(int steps = kDefaultStepsPerUnit) {
  auto b = [&](const char *field, double time, const char *form) {
    return HemiBisection::of(parse_expr_list(form, 2),
                             FlowDiffeo{parse_expr_list(field, 2), time, steps});
  };
  return {
      b("sin(x2), 0.5*x1", 0.7, "x2, sin(x1)"),
      b("tanh(x1)-0.3*x2, cos(x1)", -0.9, "1, x1*x2"),
      b("0.4*x2+0.2, -0.4*x1", 1.1, "cos(x2), 0"),
      b("cos(x1+x2), atan(x1)", 0.5, "x1/(1+x2^2), exp(-x1^2)"),
      b("0.3, -0.2", -1.0, "0.5, x1"),
  };
}

/// n = 1 translations x ↦ x + c.
inline std::vector<HemiBisection> translations(int steps = kDefaultStepsPerUnit) {
  std::vector<HemiBisection> out;
  for (const char *c : {"0.5", "-1.25", "2", "0.1"})
    out.push_back(HemiBisection::of({parse_expr("x1", 1)},
                                    FlowDiffeo{{parse_expr(c, 1)}, 1.0, steps}));
  return out;
}

/// Random elements (m, α, n) in [−1,1]^(3n).
inline std::vector<HemiElement> elements(Rng &rng, int n, std::size_t count) {
  std::vector<HemiElement> out(count);
  for (auto &e : out) {
    for (auto *v : {&e.m, &e.alpha, &e.nTarget}) {
      v->resize(n);
      for (auto &c : *v)
        c = rng.uniform(-1, 1);
    }
  }
  return out;
}

struct BracketCase {
  std::string name;
  SectionA b, a;
  std::vector<double> p;
};

/// Five cases over n = 1 and n = 2.
inline std::vector<BracketCase> bracket_cases() {
  return {
      {"translation on sin form", SectionA::parse("1", "0", 1), SectionA::parse("0", "sin(x1)", 1),
       {0.0}},
      {"dilation against translation", SectionA::parse("x1", "0", 1), SectionA::parse("1", "0", 1),
       {1.0}},
      {"nonlinear n=1", SectionA::parse("sin(x1)", "x1^2", 1),
       SectionA::parse("x1^2/(1+x1^2)", "cos(x1)", 1), {0.7}},
      {"rotation against shear n=2", SectionA::parse("-x2, x1", "x1, x2", 2),
       SectionA::parse("x2^2, 0", "x1*x2, 1", 2), {0.3, -0.5}},
      {"mixed n=2", SectionA::parse("sin(x2), 0.5*x1", "0, 0", 2),
       SectionA::parse("tanh(x1)-0.3*x2, cos(x1)", "x2, sin(x1)", 2), {-0.4, 0.6}},
  };
}

} // namespace hemi_catalog

} // namespace rackworks
