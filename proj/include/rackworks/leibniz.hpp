#pragma once

// Leibniz algebras by structure constants: [e_i, e_j] = Σ_k c[i][j][k] e_k.

#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "common.hpp"

namespace rackworks {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

/// Decimal integer [+-]?[0-9]+; cpp_int alone would read "010" as octal.
inline boost::multiprecision::cpp_int parse_integer(const std::string &text,
                                                    const std::string &whole) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-'))
    negative = text[i++] == '-';
  if (i == text.size())
    throw InputError("malformed rational: " + whole);
  boost::multiprecision::cpp_int v = 0;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9')
      throw InputError("malformed rational: " + whole);
    v = v * 10 + (text[i] - '0');
  }
  return negative ? -v : v;
}

} // namespace detail

/// Parses "p/q", "p" or a finite decimal such as "-0.25" exactly.
inline Rational parse_rational(const std::string &text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const auto num = detail::parse_integer(text.substr(0, slash), text);
    const auto den = detail::parse_integer(text.substr(slash + 1), text);
    if (den == 0)
      throw InputError("rational with zero denominator: " + text);
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos)
    return Rational(detail::parse_integer(text, text));
  const std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
  if (frac.empty() || frac[0] == '+' || frac[0] == '-')
    throw InputError("malformed rational: " + text);
  const bool negative = !whole.empty() && whole[0] == '-';
  const std::string intPart = whole == "-" || whole == "+" || whole.empty() ? "0" : whole;
  boost::multiprecision::cpp_int den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i)
    den *= 10;
  const Rational magnitude =
      abs(Rational(detail::parse_integer(intPart, text))) +
      Rational(detail::parse_integer(frac, text), den);
  return negative ? Rational(-magnitude) : magnitude;
}

inline std::string to_string(const Rational &q) { return q.str(); }

template <class Scalar> struct ScalarTraits;

template <> struct ScalarTraits<Rational> {
  static bool is_zero(const Rational &x, double) { return x == 0; }
  static double magnitude(const Rational &x) {
    return std::abs(static_cast<double>(x));
  }
};

template <> struct ScalarTraits<double> {
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static double magnitude(double x) { return std::abs(x); }
};

template <class Scalar> class LeibnizStructure {
public:
  LeibnizStructure() = default;

  explicit LeibnizStructure(int dim)
      : dim_(dim), c_(static_cast<std::size_t>(dim) * dim * dim, Scalar(0)) {
    if (dim < 0)
      throw InputError("leibniz: negative dimension");
  }

  /// From a nested d×d×d cube; throws InputError on shape mismatch.
  static LeibnizStructure
  from_cube(const std::vector<std::vector<std::vector<Scalar>>> &cube) {
    const int d = static_cast<int>(cube.size());
    LeibnizStructure s(d);
    for (int i = 0; i < d; ++i) {
      if (static_cast<int>(cube[i].size()) != d)
        throw InputError("leibniz: c[" + std::to_string(i) + "] has wrong size");
      for (int j = 0; j < d; ++j) {
        if (static_cast<int>(cube[i][j].size()) != d)
          throw InputError("leibniz: c[" + std::to_string(i) + "][" +
                           std::to_string(j) + "] has wrong size");
        for (int k = 0; k < d; ++k)
          s.at(i, j, k) = cube[i][j][k];
      }
    }
    return s;
  }

  int dim() const { return dim_; }
  Scalar &at(int i, int j, int k) { return c_[index(i, j, k)]; }
  const Scalar &at(int i, int j, int k) const { return c_[index(i, j, k)]; }

  std::vector<Scalar> bracket(const std::vector<Scalar> &x,
                              const std::vector<Scalar> &y) const {
    std::vector<Scalar> out(dim_, Scalar(0));
    for (int i = 0; i < dim_; ++i) {
      if (x[i] == 0)
        continue;
      for (int j = 0; j < dim_; ++j) {
        if (y[j] == 0)
          continue;
        for (int k = 0; k < dim_; ++k)
          out[k] += x[i] * y[j] * at(i, j, k);
      }
    }
    return out;
  }

  std::vector<Scalar> basis(int i) const {
    std::vector<Scalar> e(dim_, Scalar(0));
    e[i] = Scalar(1);
    return e;
  }

  friend bool operator==(const LeibnizStructure &, const LeibnizStructure &) = default;

private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
  }

  int dim_ = 0;
  std::vector<Scalar> c_;
};

struct LeibnizReport {
  bool valid = true;
  bool antisymmetric = true;
  double max_residual = 0.0;
  std::vector<Violation> violations; // "leibniz-identity" (i,j,k,l)
};

/// Checks [x,[y,z]] = [[x,y],z] + [y,[x,z]] on all basis triples and
/// antisymmetry c[i][j][k] = -c[j][i][k]. Floats use tol on residuals.
template <class Scalar>
LeibnizReport check_leibniz(const LeibnizStructure<Scalar> &s,
                            double tol = 1e-12) {
  using Tr = ScalarTraits<Scalar>;
  LeibnizReport r;
  const int d = s.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const auto ei = s.basis(i), ej = s.basis(j), ek = s.basis(k);
        const auto lhs = s.bracket(ei, s.bracket(ej, ek));
        const auto r1 = s.bracket(s.bracket(ei, ej), ek);
        const auto r2 = s.bracket(ej, s.bracket(ei, ek));
        for (int l = 0; l < d; ++l) {
          const Scalar res = lhs[l] - r1[l] - r2[l];
          r.max_residual = std::max(r.max_residual, Tr::magnitude(res));
          if (!Tr::is_zero(res, tol) && r.valid) {
            r.valid = false;
            r.violations.push_back({"leibniz-identity", {i, j, k, l}});
          }
        }
      }
  for (int i = 0; i < d && r.antisymmetric; ++i)
    for (int j = 0; j < d && r.antisymmetric; ++j)
      for (int k = 0; k < d && r.antisymmetric; ++k)
        if (!Tr::is_zero(s.at(i, j, k) + s.at(j, i, k), tol))
          r.antisymmetric = false;
  return r;
}

/// action[a][b][c]: basis element a of g sends basis element b of m to
/// Σ_c action[a][b][c] f_c.
template <class Scalar>
using RepresentationCube = std::vector<std::vector<std::vector<Scalar>>>;

/// Leibniz algebra on g ⊕ m with [(x,u),(y,v)] = ([x,y], x·v). g must be a
/// Lie algebra and the action a representation; violations throw
/// HypothesisError ("lie-algebra" or "representation" with the basis pair).
template <class Scalar>
LeibnizStructure<Scalar>
hemisemidirect_product(const LeibnizStructure<Scalar> &g,
                       const RepresentationCube<Scalar> &action,
                       double tol = 1e-12) {
  using Tr = ScalarTraits<Scalar>;
  const int dg = g.dim();
  if (static_cast<int>(action.size()) != dg)
    throw InputError("hemisemidirect: action needs one matrix per basis vector of g");
  const int dm = dg == 0 ? 0 : static_cast<int>(action[0].size());
  for (const auto &mat : action) {
    if (static_cast<int>(mat.size()) != dm)
      throw InputError("hemisemidirect: inconsistent module dimension");
    for (const auto &row : mat)
      if (static_cast<int>(row.size()) != dm)
        throw InputError("hemisemidirect: action matrices must be square");
  }
  const auto gr = check_leibniz(g, tol);
  if (!gr.valid)
    throw HypothesisError("lie-algebra", gr.violations.front().witness);
  if (!gr.antisymmetric)
    throw HypothesisError("lie-algebra-antisymmetry", {});

  // ρ(e_a) as a matrix acting on column vectors: (ρ_a)_{c b} = action[a][b][c].
  auto rho = [&](int a, int b, int c) -> const Scalar & { return action[a][b][c]; };
  for (int a = 0; a < dg; ++a)
    for (int b = 0; b < dg; ++b)
      for (int u = 0; u < dm; ++u)
        for (int w = 0; w < dm; ++w) {
          // ρ([e_a,e_b]) e_u, component w
          Scalar lhs(0);
          for (int k = 0; k < dg; ++k)
            lhs += g.at(a, b, k) * rho(k, u, w);
          // (ρ_a ρ_b - ρ_b ρ_a) e_u, component w
          Scalar rhs(0);
          for (int v = 0; v < dm; ++v)
            rhs += rho(b, u, v) * rho(a, v, w) - rho(a, u, v) * rho(b, v, w);
          if (!Tr::is_zero(lhs - rhs, tol))
            throw HypothesisError("representation", {a, b});
        }

  LeibnizStructure<Scalar> out(dg + dm);
  for (int i = 0; i < dg; ++i)
    for (int j = 0; j < dg; ++j)
      for (int k = 0; k < dg; ++k)
        out.at(i, j, k) = g.at(i, j, k);
  for (int a = 0; a < dg; ++a)
    for (int u = 0; u < dm; ++u)
      for (int w = 0; w < dm; ++w)
        out.at(a, dg + u, dg + w) = rho(a, u, w);
  return out;
}

/// g_t on R⁴: [x,y]_t = (0,0,0, t x1y1 + x1y2 − x2y1 + t x2y2 + t x3y3).
inline LeibnizStructure<Rational> covez_leibniz(const Rational &t) {
  LeibnizStructure<Rational> s(4);
  s.at(0, 0, 3) = t;
  s.at(0, 1, 3) = 1;
  s.at(1, 0, 3) = -1;
  s.at(1, 1, 3) = t;
  s.at(2, 2, 3) = t;
  return s;
}

/// sl2 in the basis (e, f, h): [e,f] = h, [h,e] = 2e, [h,f] = −2f.
template <class Scalar = Rational> LeibnizStructure<Scalar> sl2() {
  LeibnizStructure<Scalar> s(3);
  const int e = 0, f = 1, h = 2;
  s.at(e, f, h) = 1;
  s.at(f, e, h) = -1;
  s.at(h, e, e) = 2;
  s.at(e, h, e) = -2;
  s.at(h, f, f) = -2;
  s.at(f, h, f) = 2;
  return s;
}

/// The adjoint representation in the cube layout of hemisemidirect_product.
template <class Scalar>
RepresentationCube<Scalar> adjoint_representation(const LeibnizStructure<Scalar> &g) {
  const int d = g.dim();
  RepresentationCube<Scalar> rho(
      d, std::vector<std::vector<Scalar>>(d, std::vector<Scalar>(d, Scalar(0))));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        rho[a][b][c] = g.at(a, b, c);
  return rho;
}

template <class Scalar>
LeibnizStructure<double> to_double(const LeibnizStructure<Scalar> &s) {
  LeibnizStructure<double> out(s.dim());
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j)
      for (int k = 0; k < s.dim(); ++k)
        out.at(i, j, k) = static_cast<double>(s.at(i, j, k));
  return out;
}

} // namespace rackworks
