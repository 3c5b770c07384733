#pragma once

// Shared sandbox constructors for the test binaries.

#include <algorithm>
#include <random>
#include <vector>

#include "relstab/decomposition.hpp"
#include "relstab/module.hpp"

namespace testsupport {

using namespace relstab;

inline const FieldSpec F2{2};
inline const FieldSpec F3{3};

inline GroupPtr cyclic_group(std::uint32_t n) {
  Perm g(n);
  for (std::uint32_t i = 0; i < n; ++i) g[i] = (i + 1) % n;
  return build_group({g});
}

inline GroupPtr klein_four() {
  return build_group({perm_from_cycles(4, {{0, 1}, {2, 3}}), perm_from_cycles(4, {{0, 2}, {1, 3}})});
}

// Unipotent Jordan block I + N of size n.
inline Matrix jordan_block(FieldSpec f, std::size_t n) {
  Matrix m = Matrix::identity(f, n);
  for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = 1;
  return m;
}

// J_n over a cyclic group given by a single generator.
inline GModule jordan_module(const GroupPtr& g, FieldSpec f, std::size_t n) {
  return GModule(g, f, n, {jordan_block(f, n)});
}

inline GModule sum(const std::vector<GModule>& parts) {
  return direct_sum_module(parts.front().group_ptr(), parts.front().field(), parts);
}

// Random module conjugate to `m` by a random invertible matrix.
inline GModule conjugate_randomly(const GModule& m, std::mt19937_64& rng, Matrix* conj = nullptr) {
  const FieldSpec f = m.field();
  for (;;) {
    Matrix p(f, m.dim(), m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j) p(i, j) = static_cast<Scalar>(rng() % f.p());
    auto pinv = inverse(p);
    if (!pinv) continue;
    std::vector<Matrix> acts;
    for (const auto& a : m.actions()) acts.push_back(p * a * *pinv);
    if (conj) *conj = p;
    return GModule(m.group_ptr(), f, m.dim(), std::move(acts));
  }
}

// Dimension of the intertwiner space by the direct Kronecker system
// (I (x) B_s - A_s^T (x) I) vec(T) = 0 with row-major vec.
inline std::size_t brute_hom_dim(const GModule& m, const GModule& n) {
  const FieldSpec f = m.field();
  const std::size_t dm = m.dim(), dn = n.dim();
  if (dm == 0 || dn == 0) return 0;
  Matrix sys(f, m.actions().size() * dm * dn, dm * dn);
  for (std::size_t s = 0; s < m.actions().size(); ++s) {
    const Matrix& a = m.action(s);
    const Matrix& b = n.action(s);
    // (B T - T A)[i][j] = sum_k B[i][k] T[k][j] - sum_k T[i][k] A[k][j].
    for (std::size_t i = 0; i < dn; ++i)
      for (std::size_t j = 0; j < dm; ++j) {
        const std::size_t row = s * dm * dn + i * dm + j;
        for (std::size_t k = 0; k < dn; ++k) sys(row, k * dm + j) = f.add(sys(row, k * dm + j), b(i, k));
        for (std::size_t k = 0; k < dm; ++k)
          sys(row, i * dm + k) = f.sub(sys(row, i * dm + k), a(k, j));
      }
  }
  return dm * dn - rank(sys);
}

// Summand dimensions with multiplicity, largest first. Over a cyclic
// p-group this is the Jordan type.
inline std::vector<std::size_t> block_sizes(const GModule& m) {
  std::vector<std::size_t> out;
  for (const auto& s : krull_schmidt(m).summands)
    for (std::size_t i = 0; i < s.multiplicity; ++i) out.push_back(s.module.dim());
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace testsupport
