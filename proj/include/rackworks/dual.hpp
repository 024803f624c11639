#pragma once

// Forward-mode dual numbers with a gradient of up to three directions.
// Nesting Dual<Dual<double>> gives second derivatives.

#include <array>
#include <cmath>
#include <vector>

namespace rackworks {

inline constexpr int kMaxDim = 3;

template <class T> struct Dual {
  T v{};
  std::array<T, kMaxDim> d{};

  Dual() = default;
  Dual(double c) : v(c) {} // NOLINT: constants promote implicitly
  template <class U = T, class = std::enable_if_t<!std::is_same_v<U, double>>>
  Dual(const T &c) : v(c) {} // NOLINT

  static Dual variable(const T &value, int i) {
    Dual x(value);
    x.d[i] = T(1);
    return x;
  }

  Dual &operator+=(const Dual &o) {
    v += o.v;
    for (int i = 0; i < kMaxDim; ++i)
      d[i] += o.d[i];
    return *this;
  }
  Dual &operator-=(const Dual &o) {
    v -= o.v;
    for (int i = 0; i < kMaxDim; ++i)
      d[i] -= o.d[i];
    return *this;
  }
  Dual &operator*=(const Dual &o) { return *this = *this * o; }
  Dual &operator/=(const Dual &o) { return *this = *this / o; }

  friend Dual operator+(Dual a, const Dual &b) { return a += b; }
  friend Dual operator-(Dual a, const Dual &b) { return a -= b; }
  friend Dual operator-(const Dual &a) {
    Dual r;
    r.v = -a.v;
    for (int i = 0; i < kMaxDim; ++i)
      r.d[i] = -a.d[i];
    return r;
  }
  friend Dual operator*(const Dual &a, const Dual &b) {
    Dual r;
    r.v = a.v * b.v;
    for (int i = 0; i < kMaxDim; ++i)
      r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend Dual operator/(const Dual &a, const Dual &b) {
    Dual r;
    r.v = a.v / b.v;
    const T inv2 = T(1) / (b.v * b.v);
    for (int i = 0; i < kMaxDim; ++i)
      r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * inv2;
    return r;
  }
};

namespace detail {

/// f(x) with derivative f'(x): d ↦ f'(v)·d.
template <class T> Dual<T> chain(const Dual<T> &x, const T &fx, const T &dfx) {
  Dual<T> r;
  r.v = fx;
  for (int i = 0; i < kMaxDim; ++i)
    r.d[i] = dfx * x.d[i];
  return r;
}

} // namespace detail

template <class T> Dual<T> sin(const Dual<T> &x) {
  using std::cos, std::sin;
  return detail::chain(x, T(sin(x.v)), T(cos(x.v)));
}
template <class T> Dual<T> cos(const Dual<T> &x) {
  using std::cos, std::sin;
  return detail::chain(x, T(cos(x.v)), T(-sin(x.v)));
}
template <class T> Dual<T> exp(const Dual<T> &x) {
  using std::exp;
  const T e = exp(x.v);
  return detail::chain(x, e, e);
}
template <class T> Dual<T> tanh(const Dual<T> &x) {
  using std::tanh;
  const T th = tanh(x.v);
  return detail::chain(x, th, T(T(1) - th * th));
}
template <class T> Dual<T> atan(const Dual<T> &x) {
  using std::atan;
  return detail::chain(x, T(atan(x.v)), T(T(1) / (T(1) + x.v * x.v)));
}

/// Value part all the way down.
inline double value_of(double x) { return x; }
template <class T> double value_of(const Dual<T> &x) { return value_of(x.v); }

inline bool all_finite(double x) { return std::isfinite(x); }
template <class T> bool all_finite(const Dual<T> &x) {
  if (!all_finite(x.v))
    return false;
  for (const auto &g : x.d)
    if (!all_finite(g))
      return false;
  return true;
}

/// A point with an n×n Jacobian carried along: x_i seeded with e_i.
template <class T> using DualVec = std::vector<Dual<T>>;

template <class T> DualVec<T> seed(const std::vector<T> &p) {
  DualVec<T> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out[i] = Dual<T>::variable(p[i], static_cast<int>(i));
  return out;
}

template <class T> std::vector<T> values(const DualVec<T> &x) {
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = x[i].v;
  return out;
}

/// J[i][j] = ∂x_i/∂p_j.
template <class T> std::vector<std::vector<T>> jacobian(const DualVec<T> &x) {
  const std::size_t n = x.size();
  std::vector<std::vector<T>> J(n, std::vector<T>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      J[i][j] = x[i].d[j];
  return J;
}

} // namespace rackworks
