#ifndef EQO_CATALOG_HPP
#define EQO_CATALOG_HPP

// Named operators with known reorderings:
//   harmonic_time_displacement(t)   exp[-(it/2)(x^2 - d^2)]
//   squeeze_1d(z1, z2)              a = b = i z2, c = -z1
//   two_mode_squeeze(g)             exp[g a1 a2 - g* a1+ a2+] in (x, d) form
//   coupled_oscillator(t, lambda)   R = [[-itM, 0], [0, itI]], M = [[1, l], [l, 1]]

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "eqo/closed_form_1d.hpp"
#include "eqo/reordering.hpp"

namespace eqo {

template <typename Real = double>
struct NamedOperator {
  std::string name;
  std::map<std::string, Complex<Real>> params;
  QuadraticGenerator<Real> generator;
};

template <typename Real = double>
NamedOperator<Real> harmonic_time_displacement(Real t) {
  const Complex<Real> it(0, t);
  auto g = Coefficients1D<Real>::make(-it, it, Complex<Real>(0)).generator();
  return {"harmonic_time_displacement", {{"t", t}}, std::move(g)};
}

template <typename Real = double>
NamedOperator<Real> squeeze_1d(Real z1, Real z2) {
  const Complex<Real> iz2(0, z2);
  auto g = Coefficients1D<Real>::make(iz2, iz2, Complex<Real>(-z1)).generator();
  return {"squeeze_1d", {{"z1", z1}, {"z2", z2}}, std::move(g)};
}

/// R = N diag(-g* sigma, g sigma) N^{-1} with N = (1/sqrt 2)[[I, I], [-I, I]],
/// which works out to D1 = D2 = (g - g*)/2 sigma and F = (g + g*)/2 sigma.
/// The product is formed as written rather than from the reduced blocks.
template <typename Real = double>
NamedOperator<Real> two_mode_squeeze(Complex<Real> g) {
  using M = ComplexMatrix<Real>;
  M pauli_x(2, 2);
  pauli_x << 0, 1, 1, 0;
  const Real s = Real(1) / std::sqrt(Real(2));
  M basis(4, 4);
  basis << M::Identity(2, 2), M::Identity(2, 2), -M::Identity(2, 2), M::Identity(2, 2);
  basis *= s;
  M basis_inv(4, 4);
  basis_inv << M::Identity(2, 2), -M::Identity(2, 2), M::Identity(2, 2), M::Identity(2, 2);
  basis_inv *= s;
  M inner = M::Zero(4, 4);
  inner.topLeftCorner(2, 2) = -std::conj(g) * pauli_x;
  inner.bottomRightCorner(2, 2) = g * pauli_x;
  M r = basis * inner * basis_inv;
  // Exact in exact arithmetic; strip the 1/sqrt(2)^2 rounding from the mirror entries.
  r = (r + r.transpose()).eval() / Real(2);
  auto gen = QuadraticGenerator<Real>::assemble(r.topLeftCorner(2, 2), r.topRightCorner(2, 2),
                                                r.bottomRightCorner(2, 2));
  return {"two_mode_squeeze", {{"re_g", g.real()}, {"im_g", g.imag()}}, std::move(gen)};
}

/// [[1, lambda], [lambda, 1]].
template <typename Real = double>
ComplexMatrix<Real> coupling_matrix(Real lambda) {
  ComplexMatrix<Real> m(2, 2);
  m << 1, lambda, lambda, 1;
  return m;
}

template <typename Real = double>
NamedOperator<Real> coupled_oscillator(Real t, Real lambda) {
  using M = ComplexMatrix<Real>;
  if (!(std::abs(lambda) <= Real(1))) throw InvalidArgument("coupled_oscillator: lambda must lie in [-1, 1]");
  const Complex<Real> it(0, t);
  auto gen = QuadraticGenerator<Real>::assemble(-it * coupling_matrix(lambda), M::Zero(2, 2),
                                                it * M::Identity(2, 2));
  return {"coupled_oscillator", {{"t", t}, {"lambda", lambda}}, std::move(gen)};
}

/// Closed-form principal sqrt of the coupling matrix:
/// [[cos w, sin w], [sin w, cos w]] with w = asin(lambda)/2.
template <typename Real = double>
ComplexMatrix<Real> sqrt_M_closed_form(Real lambda) {
  if (!(std::abs(lambda) <= Real(1))) throw InvalidArgument("sqrt_M_closed_form: lambda must lie in [-1, 1]");
  const Real w = std::asin(lambda) / Real(2);
  ComplexMatrix<Real> m(2, 2);
  m << std::cos(w), std::sin(w), std::sin(w), std::cos(w);
  return m;
}

struct CatalogEntry {
  std::string_view name;
  std::vector<std::string_view> params;
};

inline const std::array<CatalogEntry, 4>& catalog_entries() {
  static const std::array<CatalogEntry, 4> entries{{
      {"harmonic_time_displacement", {"t"}},
      {"squeeze_1d", {"z1", "z2"}},
      {"two_mode_squeeze", {"re_g", "im_g"}},
      {"coupled_oscillator", {"t", "lambda"}},
  }};
  return entries;
}

/// Look up a catalog operator by name. Every parameter the entry declares is
/// required; unknown keys are rejected.
template <typename Real = double>
NamedOperator<Real> make_named(std::string_view name, const std::map<std::string, Real>& params) {
  const CatalogEntry* entry = nullptr;
  for (const auto& e : catalog_entries())
    if (e.name == name) entry = &e;
  if (!entry) throw InvalidArgument("unknown catalog operator '" + std::string(name) + "'");
  for (const auto& [key, value] : params) {
    bool known = false;
    for (const auto p : entry->params) known = known || p == key;
    if (!known) throw InvalidArgument("catalog operator '" + std::string(name) + "' has no parameter '" + key + "'");
    if (!std::isfinite(value)) throw InvalidArgument("parameter '" + key + "' is not finite");
  }
  auto get = [&](std::string_view key) {
    const auto it = params.find(std::string(key));
    if (it == params.end())
      throw InvalidArgument("catalog operator '" + std::string(name) + "' needs parameter '" + std::string(key) + "'");
    return it->second;
  };
  if (name == "harmonic_time_displacement") return harmonic_time_displacement<Real>(get("t"));
  if (name == "squeeze_1d") return squeeze_1d<Real>(get("z1"), get("z2"));
  if (name == "two_mode_squeeze") return two_mode_squeeze<Real>({get("re_g"), get("im_g")});
  return coupled_oscillator<Real>(get("t"), get("lambda"));
}

}  // namespace eqo

#endif  // EQO_CATALOG_HPP
