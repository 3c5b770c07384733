// Brute-force oracle for the derived example values.
//
// Everything here is computed from first principles on explicit matrices:
// groups are abelian products of cyclic groups given by generator matrices,
// hom spaces come from the full Kronecker intertwiner system, modules over
// cyclic groups are identified by Jordan type, and factorisations through a
// class of modules are decided by spanning all composites through it. Only
// the exact linear algebra layer of the library is used.
//
// Usage: generate_fixtures <output.json>
//        generate_fixtures --check <committed.json>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "relstab/linalg.hpp"

using namespace relstab;
using json = nlohmann::ordered_json;

namespace {

const FieldSpec F2{2};

// Abelian group C_{n_1} x ... x C_{n_r}; elements are exponent tuples in
// mixed radix order.
struct AbGroup {
  std::vector<unsigned> orders;

  std::size_t order() const {
    std::size_t n = 1;
    for (auto o : orders) n *= o;
    return n;
  }
  std::vector<unsigned> tuple(std::size_t e) const {
    std::vector<unsigned> t(orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
      t[i] = e % orders[i];
      e /= orders[i];
    }
    return t;
  }
  std::size_t index(const std::vector<unsigned>& t) const {
    std::size_t e = 0, mult = 1;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      e += (t[i] % orders[i]) * mult;
      mult *= orders[i];
    }
    return e;
  }
  std::size_t inverse(std::size_t e) const {
    auto t = tuple(e);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = (orders[i] - t[i]) % orders[i];
    return index(t);
  }
};

struct Mod {
  const AbGroup* g;
  std::vector<Matrix> gens;
  std::size_t dim() const { return gens.front().rows(); }
};

Matrix power(const Matrix& a, unsigned n) {
  Matrix r = Matrix::identity(a.field(), a.rows());
  for (unsigned i = 0; i < n; ++i) r = r * a;
  return r;
}

Matrix element(const Mod& m, std::size_t e) {
  const auto t = m.g->tuple(e);
  Matrix r = Matrix::identity(F2, m.dim());
  for (std::size_t i = 0; i < t.size(); ++i) r = r * power(m.gens[i], t[i]);
  return r;
}

Matrix jordan(std::size_t n) {
  Matrix m = Matrix::identity(F2, n);
  for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = 1;
  return m;
}

Mod trivial(const AbGroup& g) {
  return {&g, std::vector<Matrix>(g.orders.size(), Matrix::identity(F2, 1))};
}

Mod regular(const AbGroup& g) {
  Mod m{&g, {}};
  const std::size_t n = g.order();
  for (std::size_t i = 0; i < g.orders.size(); ++i) {
    Matrix a(F2, n, n);
    for (std::size_t e = 0; e < n; ++e) {
      auto t = g.tuple(e);
      t[i] += 1;
      a(g.index(t), e) = 1;
    }
    m.gens.push_back(a);
  }
  return m;
}

Mod tensor(const Mod& a, const Mod& b) {
  Mod m{a.g, {}};
  for (std::size_t i = 0; i < a.gens.size(); ++i) m.gens.push_back(kron(a.gens[i], b.gens[i]));
  return m;
}

Mod dual(const Mod& a) {
  Mod m{a.g, {}};
  for (const auto& x : a.gens) m.gens.push_back(inverse(x)->transpose());
  return m;
}

Mod dsum(const Mod& a, const Mod& b) {
  Mod m{a.g, {}};
  for (std::size_t i = 0; i < a.gens.size(); ++i) m.gens.push_back(block_diag(a.gens[i], b.gens[i]));
  return m;
}

Mod copies(const Mod& a, std::size_t r) {
  Mod m{a.g, std::vector<Matrix>(a.gens.size(), Matrix(F2, 0, 0))};
  for (std::size_t k = 0; k < r; ++k) m = dsum(m, a);
  return m;
}

// All T with B_s T = T A_s, from the Kronecker system on row-major vec(T).
std::vector<Matrix> hom_basis(const Mod& a, const Mod& b) {
  const std::size_t da = a.dim(), db = b.dim();
  if (da == 0 || db == 0) return {};
  Matrix sys(F2, a.gens.size() * da * db, da * db);
  for (std::size_t s = 0; s < a.gens.size(); ++s)
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = 0; j < da; ++j) {
        const std::size_t row = s * da * db + i * da + j;
        for (std::size_t k = 0; k < db; ++k)
          sys(row, k * da + j) = F2.add(sys(row, k * da + j), b.gens[s](i, k));
        for (std::size_t k = 0; k < da; ++k)
          sys(row, i * da + k) = F2.add(sys(row, i * da + k), a.gens[s](k, j));
      }
  const Matrix ker = kernel_basis(sys);
  std::vector<Matrix> out;
  for (std::size_t c = 0; c < ker.cols(); ++c) out.push_back(unflatten(F2, db, da, ker.column(c)));
  return out;
}

// Sizes of Jordan blocks of g - 1 for a module over a cyclic group.
std::vector<std::size_t> jordan_type(const Mod& m) {
  const std::size_t n = m.dim();
  const Matrix nil = m.gens[0] - Matrix::identity(F2, n);
  std::vector<std::size_t> r{n};
  Matrix pw = Matrix::identity(F2, n);
  while (r.back() > 0) {
    pw = pw * nil;
    r.push_back(rank(pw));
  }
  // Blocks of size >= i number r[i-1] - r[i].
  std::vector<std::size_t> at_least;
  for (std::size_t i = 1; i < r.size(); ++i) at_least.push_back(r[i - 1] - r[i]);
  std::vector<std::size_t> type;
  for (std::size_t i = 0; i < at_least.size(); ++i) {
    const std::size_t next = i + 1 < at_least.size() ? at_least[i + 1] : 0;
    for (std::size_t c = 0; c < at_least[i] - next; ++c) type.push_back(i + 1);
  }
  std::sort(type.rbegin(), type.rend());
  return type;
}

std::vector<std::size_t> drop_size(std::vector<std::size_t> type, std::size_t size) {
  type.erase(std::remove(type.begin(), type.end(), size), type.end());
  return type;
}

// Submodule on the columns of `basis`.
Mod sub(const Mod& m, const Matrix& basis) {
  Mod out{m.g, {}};
  for (const auto& a : m.gens) out.gens.push_back(*solve(basis, a * basis));
  return out;
}

// Quotient of m by the column span of `s`; also returns the projection.
std::pair<Mod, Matrix> quot(const Mod& m, const Matrix& s) {
  const Matrix sb = column_basis(s);
  const auto comp = complement_coordinates(sb);
  const Matrix c = Matrix::identity(F2, m.dim()).select_columns(comp);
  const Matrix inv = *inverse(hstack(sb, c));
  const Matrix proj = inv.block(sb.cols(), 0, comp.size(), m.dim());
  Mod out{m.g, {}};
  for (const auto& a : m.gens) out.gens.push_back(proj * a * c);
  return {out, proj};
}

// Coinduced (non-minimal) injective X -> kG^{dim X}: rows (j, g) = e_j^T A(g^-1).
std::pair<Mod, Matrix> coinduced_hull(const Mod& x) {
  const std::size_t n = x.g->order();
  Matrix i(F2, x.dim() * n, x.dim());
  for (std::size_t j = 0; j < x.dim(); ++j)
    for (std::size_t e = 0; e < n; ++e) {
      const Matrix a = element(x, x.g->inverse(e));
      for (std::size_t c = 0; c < x.dim(); ++c) i(j * n + e, c) = a(j, c);
    }
  return {copies(regular(*x.g), x.dim()), i};
}

// Minimal cover kG^t -> Y on generators complementing span{(g_i - 1) Y}.
std::pair<Mod, Matrix> minimal_cover(const Mod& y) {
  const std::size_t n = y.g->order();
  Matrix rad(F2, y.dim(), 0);
  for (const auto& a : y.gens) rad = hstack(rad, a - Matrix::identity(F2, y.dim()));
  const auto gens = complement_coordinates(column_basis(rad));
  Matrix p(F2, y.dim(), gens.size() * n);
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t e = 0; e < n; ++e) {
      const Matrix a = element(y, e);
      for (std::size_t r = 0; r < y.dim(); ++r) p(r, k * n + e) = a(r, gens[k]);
    }
  return {copies(regular(*y.g), gens.size()), p};
}

Matrix norm(const Mod& m) {
  Matrix s(F2, m.dim(), m.dim());
  for (std::size_t e = 0; e < m.g->order(); ++e) s = s + element(m, e);
  return s;
}

// f : Z -> k (a row) factors through a projective iff it lies in the row
// space of the norm of Z.
bool stmod_zero_to_trivial(const Mod& z, const Matrix& row) {
  const Matrix nz = norm(z);
  return rank(vstack(nz, row)) == rank(nz);
}

// f : Z -> X through the adjoint Z (x) X^ -> k, f~[z * dX + j] = f[j][z].
bool stmod_zero(const Mod& z, const Mod& x, const Matrix& f) {
  const Mod w = tensor(z, dual(x));
  Matrix row(F2, 1, z.dim() * x.dim());
  for (std::size_t a = 0; a < z.dim(); ++a)
    for (std::size_t j = 0; j < x.dim(); ++j) row(0, a * x.dim() + j) = f(j, a);
  return stmod_zero_to_trivial(w, row);
}

// Span of all composites X -> M -> Y for M in `through`, as flattened rows.
Subspace composite_span(const Mod& x, const Mod& y, const std::vector<Mod>& through) {
  Subspace s(F2, x.dim() * y.dim());
  for (const auto& m : through) {
    const auto in = hom_basis(x, m);
    const auto out = hom_basis(m, y);
    for (const auto& a : in)
      for (const auto& b : out) s.insert((b * a).data());
  }
  return s;
}

bool in_span(const Subspace& s, const Matrix& f) { return s.contains(f.data()); }

// Quotient dimension of Hom(X, Y) by composites through `through`.
std::size_t quotient_hom_dim(const Mod& x, const Mod& y, const std::vector<Mod>& through) {
  const auto homs = hom_basis(x, y);
  auto span = composite_span(x, y, through);
  std::size_t extra = 0;
  for (const auto& h : homs)
    if (span.insert(h.data())) ++extra;
  return extra;
}

// Cone of f : X -> Y via the coinduced hull: coker (f, i) : X -> Y (+) I.
Mod cone(const Mod& x, const Mod& y, const Matrix& f) {
  auto [inj, i] = coinduced_hull(x);
  return quot(dsum(y, inj), vstack(f, i)).first;
}

// Fibre of f : X -> Y via the minimal cover: ker (f | p) on X (+) P, with
// the projection to X.
std::pair<Mod, Matrix> fibre(const Mod& x, const Mod& y, const Matrix& f) {
  auto [p, pm] = minimal_cover(y);
  const Matrix k = kernel_basis(hstack(f, pm));
  return {sub(dsum(x, p), k), k.block(0, 0, x.dim(), k.cols())};
}

Mod sigma(const Mod& x) {
  auto [inj, i] = coinduced_hull(x);
  return quot(inj, i).first;
}

Mod omega(const Mod& x) {
  auto [p, pm] = minimal_cover(x);
  return sub(p, kernel_basis(pm));
}

// coev : 1 -> B^ (x) B, sum of e_i^ (x) e_i.
Matrix coev(std::size_t b) {
  Matrix c(F2, b * b, 1);
  for (std::size_t i = 0; i < b; ++i) c(i * b + i, 0) = 1;
  return c;
}

json type_json(const std::vector<std::size_t>& t) { return json(t); }

Matrix matrix_from(const std::vector<std::vector<int>>& rows) {
  Matrix m(F2, rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = F2.reduce(rows[i][j]);
  return m;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(unsigned(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

// F_B and xi_B : F_B -> 1 for the fibre of coev.
std::pair<Mod, Matrix> fb_and_xi(const Mod& b) {
  const Mod one = trivial(*b.g);
  const Mod e = tensor(dual(b), b);
  return fibre(one, e, coev(b.dim()));
}

// Row vector xi^{(x) n} : F^{(x) n} -> 1 and the module F^{(x) n}.
std::pair<Mod, Matrix> xi_power(const Mod& f, const Matrix& xi, unsigned n) {
  Mod m = f;
  Matrix row = xi;
  for (unsigned i = 1; i < n; ++i) {
    m = tensor(m, f);
    row = kron(row, xi);
  }
  return {m, row};
}

// Least n <= cap with xi^n (x) X stmod-zero, exploring only while the
// adjoint module stays within the matrix cap. Returns {order or 0, n_checked}.
std::pair<unsigned, unsigned> nilpotence(const Mod& f, const Matrix& xi, const Mod& x, unsigned cap) {
  unsigned checked = 0;
  for (unsigned n = 1; n <= cap; ++n) {
    std::size_t fdim = 1;
    for (unsigned i = 0; i < n; ++i) fdim *= f.dim();
    if (fdim * x.dim() * x.dim() > kMaxMatrixDim) break;
    auto [fn, row] = xi_power(f, xi, n);
    const Mod z = tensor(fn, x);
    const Matrix map = kron(row, Matrix::identity(F2, x.dim()));
    checked = n;
    if (stmod_zero(z, x, map)) return {n, checked};
  }
  return {0, checked};
}

// Normalised points of P^1(GF(2)) in the support of a Klein four module:
// alpha is in the support iff rank(sum alpha_i (g_i - 1)) < dim / 2.
json support_v4(const Mod& m) {
  json pts = json::array();
  const std::vector<std::pair<int, int>> points = {{0, 1}, {1, 0}, {1, 1}};
  const Matrix id = Matrix::identity(F2, m.dim());
  for (auto [a, b] : points) {
    Matrix u(F2, m.dim(), m.dim());
    if (a) u = u + (m.gens[0] - id);
    if (b) u = u + (m.gens[1] - id);
    if (2 * rank(u) < m.dim()) pts.push_back({a, b});
  }
  return pts;
}

// Relative strip for a cyclic group: remove the Jordan blocks whose
// identity factors through the given class.
std::vector<std::size_t> relative_strip(const AbGroup& g, const std::vector<std::size_t>& type,
                                        const std::vector<Mod>& through) {
  std::vector<std::size_t> out;
  for (auto n : type) {
    const Mod jn{&g, {jordan(n)}};
    const auto span = composite_span(jn, jn, through);
    if (!in_span(span, Matrix::identity(F2, n))) out.push_back(n);
  }
  return out;
}

json generate() {
  json fx = json::object();
  const AbGroup c2{{2}}, c4{{4}}, v4{{2, 2}};
  auto J = [&](const AbGroup& g, std::size_t n) { return Mod{&g, {jordan(n)}}; };

  // exact-linalg
  const Matrix u = matrix_from({{1, 1}, {0, 1}});
  Matrix k4(F2, 4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) k4(i * 2 + k, j * 2 + l) = F2.mul(u(i, j), u(k, l));
  fx["linalg.kron_unipotent_square"] = matrix_json(k4);

  // group-modules
  fx["modules.c4.unipotent_2x2_valid"] = power(u, 4).is_identity() && power(u, 2).is_identity();
  {
    // C_4 = <g> acting on the cosets {H, gH} of H = <g^2>: g swaps them.
    Mod perm{&c4, {matrix_from({{0, 1}, {1, 0}})}};
    fx["modules.c4.perm_on_cosets_c2.jordan_type"] = type_json(jordan_type(perm));
  }
  fx["modules.c4.j2_tensor_j2.rank_g_minus_1"] =
      rank(tensor(J(c4, 2), J(c4, 2)).gens[0] - Matrix::identity(F2, 4));
  fx["modules.c4.j2_tensor_j2.jordan_type"] = type_json(jordan_type(tensor(J(c4, 2), J(c4, 2))));
  fx["modules.c2.regular_tensor_regular.jordan_type"] =
      type_json(jordan_type(tensor(regular(c2), regular(c2))));
  fx["modules.c4.j2_dual.jordan_type"] = type_json(jordan_type(dual(J(c4, 2))));
  fx["modules.c4.hom_dim.j2_j3"] = hom_basis(J(c4, 2), J(c4, 3)).size();
  fx["modules.c2.hom_dim.trivial_regular"] = hom_basis(trivial(c2), regular(c2)).size();
  {
    Mod res{&c2, {power(regular(c4).gens[0], 2)}};
    fx["modules.c4.restrict_regular_to_c2.jordan_type"] = type_json(jordan_type(res));
  }

  // decomposition
  fx["decomposition.c4.j2_tensor_j3.jordan_type"] =
      type_json(jordan_type(tensor(J(c4, 2), J(c4, 3))));
  {
    const auto end = hom_basis(J(c4, 3), J(c4, 3));
    bool local = true;
    for (std::size_t mask = 1; mask < (1u << end.size()); ++mask) {
      Matrix phi(F2, 3, 3);
      for (std::size_t i = 0; i < end.size(); ++i)
        if ((mask >> i) & 1u) phi = phi + end[i];
      const bool invertible = rank(phi) == 3;
      const bool nilpotent = power(phi, 3).is_zero();
      if (!invertible && !nilpotent) local = false;
    }
    fx["decomposition.c4.j3_end_dim"] = end.size();
    fx["decomposition.c4.j3_indecomposable"] = local;
  }

  // stable-frobenius
  fx["stable.c2.radical_regular_dim"] = rank(regular(c2).gens[0] - Matrix::identity(F2, 2));
  fx["stable.c2.cover_trivial_dim"] = minimal_cover(trivial(c2)).first.dim();
  fx["stable.c2.hull_trivial_dim"] = dual(minimal_cover(dual(trivial(c2))).first).dim();
  {
    const Mod j2 = J(c4, 2);
    const auto cov = minimal_cover(j2).first;
    fx["stable.c4.j2_is_projective"] = cov.dim() == j2.dim();
  }
  fx["stable.c4.omega_j1.jordan_type"] = type_json(drop_size(jordan_type(omega(J(c4, 1))), 4));
  fx["stable.c2.omega_j1.jordan_type"] = type_json(drop_size(jordan_type(omega(J(c2, 1))), 2));
  fx["stable.c4.sigma_j1.jordan_type"] = type_json(drop_size(jordan_type(sigma(J(c4, 1))), 4));
  fx["stable.c4.sigma_j3.jordan_type"] = type_json(drop_size(jordan_type(sigma(J(c4, 3))), 4));
  {
    const auto span = composite_span(J(c2, 1), J(c2, 1), {regular(c2)});
    fx["stable.c2.id_trivial_factors_through_projective"] =
        in_span(span, Matrix::identity(F2, 1));
  }
  fx["stable.c4.stable_hom_dim.j2_j2"] = quotient_hom_dim(J(c4, 2), J(c4, 2), {regular(c4)});
  fx["stable.c2.stable_hom_dim.j1_j1"] = quotient_hom_dim(J(c2, 1), J(c2, 1), {regular(c2)});
  {
    const Matrix x = J(c4, 2).gens[0] - Matrix::identity(F2, 2);
    const Mod z = cone(J(c4, 2), J(c4, 2), x);
    fx["stable.c4.cone_x_on_j2.jordan_type"] = type_json(drop_size(jordan_type(z), 4));
  }
  {
    const Matrix aug = matrix_from({{1, 1}});
    auto [w, proj] = fibre(regular(c2), trivial(c2), aug);
    fx["stable.c2.fibre_augmentation.jordan_type"] = type_json(drop_size(jordan_type(w), 2));
  }
  fx["stable.c4.strip_j1_j4.jordan_type"] =
      type_json(drop_size(jordan_type(dsum(J(c4, 1), J(c4, 4))), 4));

  // relative-stable
  {
    json c2r = json::array(), c4r = json::array();
    for (std::size_t n = 1; n <= 2; ++n)
      c2r.push_back(minimal_cover(tensor(regular(c2), J(c2, n))).first.dim() == 2 * n);
    for (std::size_t n = 1; n <= 4; ++n)
      c4r.push_back(minimal_cover(tensor(regular(c4), J(c4, n))).first.dim() == 4 * n);
    fx["relative.c2_regular.b_tensor_jn_projective"] = c2r;
    fx["relative.c4_regular.b_tensor_jn_projective"] = c4r;
  }
  const Mod b = J(c4, 2);
  std::vector<Mod> through_b;
  for (std::size_t n = 1; n <= 4; ++n) through_b.push_back(tensor(b, J(c4, n)));
  through_b.push_back(regular(c4));
  {
    auto [f, xi] = fb_and_xi(b);
    fx["relative.c4_j2.fb.jordan_type"] = type_json(drop_size(jordan_type(f), 4));
    fx["relative.c4_j2.b_tensor_xi_stmod_zero"] =
        stmod_zero(tensor(b, f), b, kron(Matrix::identity(F2, 2), xi));
  }
  fx["relative.c4_j2.id_trivial_contractible"] =
      in_span(composite_span(J(c4, 1), J(c4, 1), through_b), Matrix::identity(F2, 1));
  fx["relative.c4_j2.rel_hom_dim.j1_j1"] = quotient_hom_dim(J(c4, 1), J(c4, 1), through_b);
  fx["relative.c4_j2.rel_hom_dim.j1_j3"] = quotient_hom_dim(J(c4, 1), J(c4, 3), through_b);
  fx["relative.c4_j2.strip_relative_j1_j2_j4.jordan_type"] =
      type_json(relative_strip(c4, {4, 2, 1}, through_b));
  {
    json contractible = json::object();
    for (std::size_t n = 1; n <= 4; ++n)
      contractible["J" + std::to_string(n)] =
          in_span(composite_span(J(c4, n), J(c4, n), through_b), Matrix::identity(F2, n));
    fx["relative.c4_j2.identity_contractible"] = contractible;
  }
  auto sigma_b = [&](const Mod& bb, const Mod& x, const std::vector<Mod>& through,
                     std::size_t proj_size) {
    const Mod e = tensor(tensor(dual(bb), bb), x);
    const Matrix f = kron(coev(bb.dim()), Matrix::identity(F2, x.dim()));
    const Mod z = cone(x, e, f);
    return relative_strip(*x.g, drop_size(jordan_type(z), proj_size), through);
  };
  fx["relative.c4_j2.sigma_b_j1.jordan_type"] = type_json(sigma_b(b, J(c4, 1), through_b, 4));
  {
    const auto s1 = sigma_b(b, J(c4, 1), through_b, 4);
    const auto s3 = sigma_b(b, J(c4, 3), through_b, 4);
    fx["relative.c4_j2.sigma_b_j3.jordan_type"] = type_json(s3);
    // Strip-and-compare for J_1 versus J_3.
    fx["relative.c4_j2.stable_b_iso.j1_j3"] =
        relative_strip(c4, {1}, through_b) == relative_strip(c4, {3}, through_b);
  }
  {
    json cmp = json::object();
    const Mod reg = regular(c4);
    for (std::size_t n = 1; n <= 4; ++n) {
      json entry;
      entry["sigma_b"] = type_json(sigma_b(reg, J(c4, n), {reg}, 4));
      entry["sigma"] = type_json(drop_size(jordan_type(sigma(J(c4, n))), 4));
      cmp["J" + std::to_string(n)] = entry;
    }
    fx["relative.c4_regular.sigma_b_vs_sigma"] = cmp;
  }
  {
    auto [f, xi] = fb_and_xi(regular(c2));
    fx["relative.c2_regular.fb.jordan_type"] = type_json(drop_size(jordan_type(f), 2));
  }

  // tt-lite
  {
    // Klein four: g1 acts trivially on k[V4/<g1>], g2 swaps the cosets.
    const Mod bh{&v4, {Matrix::identity(F2, 2), matrix_from({{0, 1}, {1, 0}})}};
    const Mod bh2{&v4, {matrix_from({{0, 1}, {1, 0}}), Matrix::identity(F2, 2)}};
    const Mod kv = trivial(v4);
    auto [f, xi] = fb_and_xi(bh);
    auto [order_k, checked_k] = nilpotence(f, xi, kv, 4);
    fx["tt.v4_h1.nilpotence_trivial_cap4"] =
        order_k ? json(order_k) : json("exceeds");
    fx["tt.v4_h1.nilpotence_trivial_checked_through"] = checked_k;
    fx["tt.v4.support.perm_h1"] = support_v4(bh);
    fx["tt.v4.support.trivial"] = support_v4(kv);
    fx["tt.v4.support.regular"] = support_v4(regular(v4));
    fx["tt.v4_h1.b_tensor_xi_stmod_zero"] =
        stmod_zero(tensor(bh, f), bh, kron(Matrix::identity(F2, 2), xi));

    json corpus = json::array();
    const std::vector<std::pair<std::string, Mod>> items = {
        {"k", kv}, {"B", bh}, {"Omega k", omega(kv)}, {"perm_h2", bh2}, {"B(x)B", tensor(bh, bh)}};
    const json supp_b = support_v4(bh);
    for (const auto& [name, m] : items) {
      json entry;
      entry["name"] = name;
      entry["dim"] = m.dim();
      entry["support"] = support_v4(m);
      bool inside = true;
      for (const auto& pt : entry["support"])
        if (std::find(supp_b.begin(), supp_b.end(), pt) == supp_b.end()) inside = false;
      entry["support_in_supp_b"] = inside;
      auto [ord, checked] = nilpotence(f, xi, m, 8);
      entry["nilpotence_order"] = ord ? json(ord) : json(nullptr);
      entry["nilpotence_checked_through"] = checked;
      corpus.push_back(entry);
    }
    fx["tt.v4_h1.birational_corpus"] = corpus;
    fx["tt.v4_h1.supp_b"] = supp_b;
    json u = json::array();
    for (const auto& pt : json::array({{0, 1}, {1, 0}, {1, 1}}))
      if (std::find(supp_b.begin(), supp_b.end(), pt) == supp_b.end()) u.push_back(pt);
    fx["tt.v4_h1.u"] = u;
  }
  {
    auto [f, xi] = fb_and_xi(b);
    auto [f2, row] = xi_power(f, xi, 2);
    const Mod c = cone(f2, trivial(c4), row);
    fx["tt.c4_j2.cone_xi_sq.jordan_type"] = type_json(drop_size(jordan_type(c), 4));
    json orders = json::object();
    const std::vector<std::pair<std::string, Mod>> items = {
        {"k", J(c4, 1)}, {"B", b}, {"Omega k", J(c4, 3)}, {"Sigma k", J(c4, 3)},
        {"B(x)B", tensor(b, b)}, {"k+B", dsum(J(c4, 1), b)}};
    for (const auto& [name, m] : items) {
      auto [ord, checked] = nilpotence(f, xi, m, 8);
      orders[name] = ord ? json(ord) : json(nullptr);
    }
    fx["tt.c4_j2.nilpotence_orders"] = orders;
  }
  {
    auto [f, xi] = fb_and_xi(regular(c2));
    auto [f2, row] = xi_power(f, xi, 2);
    const Mod c = cone(f2, trivial(c2), row);
    fx["tt.c2_regular.cone_xi_sq.jordan_type"] = type_json(drop_size(jordan_type(c), 2));
  }
  {
    // Thick tensor-ideal closure over C_4 at the level of Jordan blocks.
    const std::size_t cap = 8;
    std::set<std::size_t> members = {2};
    auto add_type = [&](const std::vector<std::size_t>& type, bool& changed) {
      const auto stripped = drop_size(type, 4);
      std::size_t d = 0;
      for (auto s : stripped) d += s;
      if (d > cap) return;
      for (auto s : stripped) changed |= members.insert(s).second;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      const std::vector<std::size_t> current(members.begin(), members.end());
      for (auto a : current)
        for (auto bsz : current)
          for (const auto& f : hom_basis(J(c4, a), J(c4, bsz))) {
            add_type(jordan_type(cone(J(c4, a), J(c4, bsz), f)), changed);
            add_type(jordan_type(fibre(J(c4, a), J(c4, bsz), f).first), changed);
          }
      for (auto a : current) {
        for (std::size_t t = 1; t <= 4; ++t) add_type(jordan_type(tensor(J(c4, a), J(c4, t))), changed);
        add_type(jordan_type(sigma(J(c4, a))), changed);
        add_type(jordan_type(omega(J(c4, a))), changed);
      }
    }
    fx["tt.c4.thick_closure_j2_cap8.members"] =
        std::vector<std::size_t>(members.begin(), members.end());
  }
  {
    // Stable homs k -> Sigma^n k over kC_2; Sigma^n k computed iteratively.
    json dims = json::array();
    for (int n = -3; n <= 3; ++n) {
      Mod s = J(c2, 1);
      for (int i = 0; i < std::abs(n); ++i) {
        s = n > 0 ? sigma(s) : omega(s);
        const auto t = drop_size(jordan_type(s), 2);
        Mod stripped{&c2, {Matrix::identity(F2, t.size())}};
        s = stripped;
      }
      dims.push_back(quotient_hom_dim(J(c2, 1), s, {regular(c2)}));
    }
    fx["tt.c2_regular.graded_unit_dims"] = dims;
  }
  return fx;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 2) {
    std::ofstream out(argv[1]);
    out << generate().dump(2) << "\n";
    return out ? 0 : 1;
  }
  if (argc == 3 && std::string(argv[1]) == "--check") {
    std::ifstream in(argv[2]);
    if (!in) {
      std::cerr << "cannot read " << argv[2] << "\n";
      return 1;
    }
    const json committed = json::parse(in);
    const json fresh = generate();
    if (committed != fresh) {
      for (const auto& [key, value] : fresh.items())
        if (!committed.contains(key) || committed[key] != value)
          std::cerr << "fixture differs: " << key << "\n";
      return 1;
    }
    std::cout << "fixtures reproduce (" << fresh.size() << " entries)\n";
    return 0;
  }
  std::cerr << "usage: generate_fixtures <output.json> | --check <fixtures.json>\n";
  return 1;
}
