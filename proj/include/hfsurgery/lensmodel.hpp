#pragma once

// The n-framed solid-torus model: complexes L(n), M(n) and the maps
// Psi_1(n), Psi_2(n), Psi_3(n) : L(n) -> M(n), Phi(n) : M(n) -> L(n).
//
// L(n) generators: r1..r(n-1), s1..s(n-1), p
//   d(s(i+1)) = r(i) for i = 1..n-2,   d(p) = r(n-1)
// M(n) generators: x1..x(n-1), y1..y(n-1), z1..zn
//   d(z(i+1)) = y(i) for i = 1..n-1
// Psi_1: s(i) -> x(i), p -> z1
// Psi_2: s(i) -> z(i), r(i) -> y(i), p -> zn
// Psi_3: s(i) -> y(i)
// Phi:   x(i) -> r(i)
// Every other generator maps to zero. For n = 1 the r, s, x, y families are
// empty and d(p) = 0.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hfsurgery/chain.hpp"
#include "hfsurgery/knotsys.hpp"

namespace hfs {

struct ModelSystem {
  int n = 0;
  BorderedSystem system;
};

namespace detail {

struct ModelIndex {
  std::size_t n;
  // L(n)
  std::size_t r(std::size_t i) const { return i - 1; }
  std::size_t s(std::size_t i) const { return (n - 1) + i - 1; }
  std::size_t p() const { return 2 * (n - 1); }
  std::size_t l_dim() const { return 2 * n - 1; }
  // M(n)
  std::size_t x(std::size_t i) const { return i - 1; }
  std::size_t y(std::size_t i) const { return (n - 1) + i - 1; }
  std::size_t z(std::size_t i) const { return 2 * (n - 1) + i - 1; }
  std::size_t m_dim() const { return 3 * n - 2; }
};

}  // namespace detail

inline ModelSystem build_model(int n) {
  if (n < 1) throw std::invalid_argument("build_model: n must be positive, got " + std::to_string(n));
  const detail::ModelIndex ix{static_cast<std::size_t>(n)};
  const std::size_t k = ix.n;

  std::vector<std::string> l_labels(ix.l_dim()), m_labels(ix.m_dim());
  for (std::size_t i = 1; i < k; ++i) {
    l_labels[ix.r(i)] = "r" + std::to_string(i);
    l_labels[ix.s(i)] = "s" + std::to_string(i);
    m_labels[ix.x(i)] = "x" + std::to_string(i);
    m_labels[ix.y(i)] = "y" + std::to_string(i);
  }
  l_labels[ix.p()] = "p";
  for (std::size_t i = 1; i <= k; ++i) m_labels[ix.z(i)] = "z" + std::to_string(i);

  BitMatrix ell(ix.l_dim(), ix.l_dim());
  for (std::size_t i = 1; i + 2 <= k; ++i) ell.set(ix.r(i), ix.s(i + 1));
  if (k >= 2) ell.set(ix.r(k - 1), ix.p());

  BitMatrix em(ix.m_dim(), ix.m_dim());
  for (std::size_t i = 1; i < k; ++i) em.set(ix.y(i), ix.z(i + 1));

  BitMatrix psi1(ix.m_dim(), ix.l_dim()), psi2(ix.m_dim(), ix.l_dim()), psi3(ix.m_dim(), ix.l_dim());
  BitMatrix phi(ix.l_dim(), ix.m_dim());
  for (std::size_t i = 1; i < k; ++i) {
    psi1.set(ix.x(i), ix.s(i));
    psi2.set(ix.z(i), ix.s(i));
    psi2.set(ix.y(i), ix.r(i));
    psi3.set(ix.y(i), ix.s(i));
    phi.set(ix.r(i), ix.x(i));
  }
  psi1.set(ix.z(1), ix.p());
  psi2.set(ix.z(k), ix.p());

  return ModelSystem{n, BorderedSystem{UngradedComplex(std::move(l_labels), std::move(ell)),
                                       UngradedComplex(std::move(m_labels), std::move(em)), std::move(psi1),
                                       std::move(psi2), std::move(psi3), std::move(phi)}};
}

// (dim H(L(n)), dim H(M(n))), computed from the complexes.
inline std::pair<std::size_t, std::size_t> model_homology(int n) {
  const ModelSystem m = build_model(n);
  return {ungraded_homology(m.system.L), ungraded_homology(m.system.M)};
}

inline nlohmann::json to_json(const ModelSystem& m) {
  const BorderedSystem& b = m.system;
  return {{"n", m.n},
          {"L", {{"labels", b.L.labels()}, {"differential", b.L.differential().to_rows()}}},
          {"M", {{"labels", b.M.labels()}, {"differential", b.M.differential().to_rows()}}},
          {"maps",
           {{"Psi_1", b.psi1.to_rows()},
            {"Psi_2", b.psi2.to_rows()},
            {"Psi_3", b.psi3.to_rows()},
            {"Phi", b.phi.to_rows()}}}};
}

}  // namespace hfs
