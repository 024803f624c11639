#pragma once

// Flows of expression vector fields on Rⁿ and composition chains of them.
// Every map here is a diffeomorphism with an explicit inverse (reverse the
// chain, negate the times); Jacobians come from pushing DualVec through RK4.

#include <cmath>
#include <string>
#include <vector>

#include "dual.hpp"
#include "expr.hpp"

namespace rackworks {

inline constexpr int kDefaultStepsPerUnit = 1000;

/// Time-u flow of the field X, integrated by classical RK4 with
/// max(1, ceil(|u|·steps_per_unit)) equal steps.
struct FlowDiffeo {
  std::vector<Expr> generator;
  double time = 0;
  int steps_per_unit = kDefaultStepsPerUnit;

  int dim() const { return static_cast<int>(generator.size()); }

  int steps() const {
    const double s = std::ceil(std::abs(time) * steps_per_unit);
    return s < 1 ? 1 : static_cast<int>(s);
  }

  FlowDiffeo inverse() const { return {generator, -time, steps_per_unit}; }
};

namespace detail {

template <class T> void require_finite(const std::vector<T> &x, const char *where) {
  for (const auto &c : x)
    if (!all_finite(c))
      throw NumericError(std::string("non-finite value in ") + where);
}

template <class T>
std::vector<T> axpy(const std::vector<T> &p, double h, const std::vector<T> &k) {
  std::vector<T> out(p);
  for (std::size_t i = 0; i < p.size(); ++i)
    out[i] = out[i] + T(h) * k[i];
  return out;
}

} // namespace detail

/// φ(base + δ) − base, integrated on the offset so that small
/// displacements keep full relative precision regardless of |base|.
template <class T>
std::vector<T> flow_offset(const FlowDiffeo &phi, const std::vector<T> &base, std::vector<T> d) {
  if (static_cast<int>(base.size()) != phi.dim() || d.size() != base.size())
    throw InputError("flow: point dimension " + std::to_string(base.size()) +
                     " does not match field dimension " + std::to_string(phi.dim()));
  if (phi.steps_per_unit < 1)
    throw InputError("flow: steps per unit must be positive");
  const int n = phi.steps();
  const double h = phi.time / n;
  auto field = [&](const std::vector<T> &off) {
    std::vector<T> x(base);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = x[i] + off[i];
    return eval_all(phi.generator, x);
  };
  for (int s = 0; s < n; ++s) {
    const auto k1 = field(d);
    const auto k2 = field(detail::axpy(d, h / 2, k1));
    const auto k3 = field(detail::axpy(d, h / 2, k2));
    const auto k4 = field(detail::axpy(d, h, k3));
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = d[i] + T(h / 6) * (k1[i] + T(2.0) * k2[i] + T(2.0) * k3[i] + k4[i]);
    detail::require_finite(d, "flow integration");
  }
  return d;
}

template <class T> std::vector<T> flow(const FlowDiffeo &phi, std::vector<T> p) {
  const auto d = flow_offset(phi, p, std::vector<T>(p.size(), T(0.0)));
  for (std::size_t i = 0; i < p.size(); ++i)
    p[i] = p[i] + d[i];
  return p;
}

/// Composite φ_k∘…∘φ_1 of flows, stored in application order.
struct Diffeo {
  int n = 1;
  std::vector<FlowDiffeo> chain;

  static Diffeo identity(int n) { return {n, {}}; }
  static Diffeo of(const FlowDiffeo &f) { return {f.dim(), {f}}; }

  bool is_identity() const { return chain.empty(); }

  /// φ(p) − p, accumulated through the chain without re-rounding at |p|.
  template <class T> std::vector<T> displacement(const std::vector<T> &p) const {
    if (static_cast<int>(p.size()) != n)
      throw InputError("diffeo: point dimension mismatch");
    std::vector<T> d(p.size(), T(0.0));
    for (const auto &f : chain)
      d = flow_offset(f, p, std::move(d));
    return d;
  }

  template <class T> std::vector<T> operator()(std::vector<T> p) const {
    const auto d = displacement(p);
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = p[i] + d[i];
    return p;
  }

  Diffeo inverse() const {
    Diffeo out{n, {}};
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      out.chain.push_back(it->inverse());
    return out;
  }

  /// Jacobian of the map at p.
  std::vector<std::vector<double>> jacobian(const std::vector<double> &p) const {
    return rackworks::jacobian((*this)(seed(p)));
  }
};

/// g∘f: f applied first.
inline Diffeo then(const Diffeo &f, const Diffeo &g) {
  if (f.n != g.n)
    throw InputError("diffeo composition: dimension mismatch");
  Diffeo out = f;
  out.chain.insert(out.chain.end(), g.chain.begin(), g.chain.end());
  return out;
}

/// ψ∘φ∘ψ⁻¹.
inline Diffeo conjugate_diffeo(const Diffeo &psi, const Diffeo &phi) {
  return then(then(psi.inverse(), phi), psi);
}

/// Row covector α times matrix J: (αJ)_j = Σ_i α_i J_ij.
inline std::vector<double> covector_times(const std::vector<double> &alpha,
                                          const std::vector<std::vector<double>> &J) {
  std::vector<double> out(alpha.size(), 0.0);
  for (std::size_t j = 0; j < alpha.size(); ++j)
    for (std::size_t i = 0; i < alpha.size(); ++i)
      out[j] += alpha[i] * J[i][j];
  return out;
}

/// ((φ⁻¹)*α)_p = α_q ∘ Jac(φ⁻¹)(p) with q = φ⁻¹(p); alpha is the covector at q.
inline std::vector<double> pullback_covector(const Diffeo &phi, const std::vector<double> &alpha,
                                             const std::vector<double> &p) {
  if (static_cast<int>(alpha.size()) != phi.n)
    throw InputError("pullback: covector dimension mismatch");
  return covector_times(alpha, phi.inverse().jacobian(p));
}

/// ((φ⁻¹)*α)_p for a 1-form given by coefficient expressions.
inline std::vector<double> pullback_oneform(const Diffeo &phi, const std::vector<Expr> &alpha,
                                            const std::vector<double> &p) {
  if (static_cast<int>(alpha.size()) != phi.n)
    throw InputError("pullback: form dimension mismatch");
  const auto q = phi.inverse()(seed(p));
  const auto a = eval_all(alpha, values(q));
  return covector_times(a, jacobian(q));
}

} // namespace rackworks
