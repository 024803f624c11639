#pragma once

// Sparse multivariate polynomials with exact rational coefficients.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "leibniz.hpp"

namespace rackworks {

class Polynomial {
public:
  using Exponents = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational &c) {
    Polynomial p(nvars);
    if (c != 0)
      p.terms_[Exponents(nvars, 0)] = c;
    return p;
  }

  static Polynomial variable(int nvars, int i) {
    Polynomial p(nvars);
    Exponents e(nvars, 0);
    e[i] = 1;
    p.terms_[e] = 1;
    return p;
  }

  int nvars() const { return nvars_; }
  const std::map<Exponents, Rational> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const Exponents &e) const {
    const auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Polynomial &operator+=(const Polynomial &o) {
    adopt(o);
    for (const auto &[e, c] : o.terms_)
      accumulate(e, c);
    return *this;
  }

  Polynomial &operator-=(const Polynomial &o) {
    adopt(o);
    for (const auto &[e, c] : o.terms_)
      accumulate(e, -c);
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
  friend Polynomial operator-(const Polynomial &a) { return Polynomial(a.nvars_) - a; }

  friend Polynomial operator*(const Polynomial &a, const Polynomial &b) {
    Polynomial out(std::max(a.nvars_, b.nvars_));
    for (const auto &[ea, ca] : a.terms_)
      for (const auto &[eb, cb] : b.terms_) {
        Exponents e(out.nvars_, 0);
        for (int i = 0; i < out.nvars_; ++i)
          e[i] = ea[i] + eb[i];
        out.accumulate(e, ca * cb);
      }
    return out;
  }

  friend Polynomial operator*(const Rational &k, const Polynomial &p) {
    return constant(p.nvars_, k) * p;
  }

  /// ∂/∂x_i.
  Polynomial derivative(int i) const {
    Polynomial out(nvars_);
    for (const auto &[e, c] : terms_)
      if (e[i] > 0) {
        Exponents d = e;
        --d[i];
        out.accumulate(d, c * e[i]);
      }
    return out;
  }

  /// Replaces x_i by the constant v.
  Polynomial substitute(int i, const Rational &v) const {
    Polynomial out(nvars_);
    for (const auto &[e, c] : terms_) {
      Rational k = c;
      for (int p = 0; p < e[i]; ++p)
        k *= v;
      Exponents d = e;
      d[i] = 0;
      out.accumulate(d, k);
    }
    return out;
  }

  Rational evaluate(const std::vector<Rational> &x) const {
    Rational sum = 0;
    for (const auto &[e, c] : terms_) {
      Rational m = c;
      for (int i = 0; i < nvars_; ++i)
        for (int p = 0; p < e[i]; ++p)
          m *= x[i];
      sum += m;
    }
    return sum;
  }

  friend bool operator==(const Polynomial &a, const Polynomial &b) {
    return a.terms_ == b.terms_;
  }

  /// "c*x^e*..." for one monomial, with the given variable names.
  static std::string monomial_string(const Exponents &e, const Rational &c,
                                     const std::vector<std::string> &names) {
    std::string s = c.str();
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) {
        s += "*" + (i < names.size() ? names[i] : "x" + std::to_string(i));
        if (e[i] > 1)
          s += "^" + std::to_string(e[i]);
      }
    return s;
  }

  std::string to_string(const std::vector<std::string> &names) const {
    if (terms_.empty())
      return "0";
    std::string s;
    for (const auto &[e, c] : terms_) {
      if (!s.empty())
        s += " + ";
      s += monomial_string(e, c, names);
    }
    return s;
  }

private:
  void adopt(const Polynomial &o) { nvars_ = std::max(nvars_, o.nvars_); }

  void accumulate(const Exponents &e, const Rational &c) {
    if (c == 0)
      return;
    Exponents key = e;
    key.resize(nvars_, 0);
    auto [it, inserted] = terms_.emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0)
        terms_.erase(it);
    }
  }

  int nvars_ = 0;
  std::map<Exponents, Rational> terms_;
};

/// First monomial (in exponent order) where a and b differ, as text, or ""
/// when they are equal.
inline std::string first_difference(const Polynomial &a, const Polynomial &b,
                                    const std::vector<std::string> &names) {
  const Polynomial d = a - b;
  if (d.is_zero())
    return "";
  const auto &[e, c] = *d.terms().begin();
  return Polynomial::monomial_string(e, c, names) + " (lhs " +
         a.coefficient(e).str() + ", rhs " + b.coefficient(e).str() + ")";
}

} // namespace rackworks
