#include "relstab/stable.hpp"

namespace relstab {

namespace {

// Rows (k, h) = row c_k of A(h^-1): the hull map for dual generators c_k.
Matrix hull_matrix(const GModule& m, const std::vector<std::size_t>& dual_gens) {
  const auto& g = m.group();
  const std::size_t order = g.order();
  Matrix out(m.field(), dual_gens.size() * order, m.dim());
  for (std::size_t k = 0; k < dual_gens.size(); ++k)
    for (std::size_t h = 0; h < order; ++h) {
      const Matrix& a = m.element_action(g.inverse(h));
      std::copy_n(a.row(dual_gens[k]).begin(), m.dim(), out.row(k * order + h).begin());
    }
  return out;
}

std::vector<std::size_t> dual_generators(const GModule& m) {
  return complement_coordinates(radical_basis(dual_module(m)));
}

struct RawCokernel {
  QuotientResult quotient;
  InjectiveHull hull;
};

RawCokernel sigma_raw(const GModule& x) {
  auto hull = injective_hull(x);
  auto q = quotient_module(hull.injective, hull.map.matrix());
  return {std::move(q), std::move(hull)};
}

}  // namespace

void require_p_group(const GModule& m) {
  if (!m.group().is_p_group(m.field().p())) throw NotPGroupError();
}

Matrix radical(const GModule& m) {
  require_p_group(m);
  return radical_basis(m);
}

ProjectiveCover projective_cover(const GModule& m) {
  require_p_group(m);
  const auto gens = complement_coordinates(radical_basis(m));
  const std::size_t order = m.group().order();
  GModule p = power_module(regular_module(m.group_ptr(), m.field()), gens.size());
  Matrix map(m.field(), m.dim(), gens.size() * order);
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t h = 0; h < order; ++h) {
      const Matrix& a = m.element_action(h);
      for (std::size_t r = 0; r < m.dim(); ++r) map(r, k * order + h) = a(r, gens[k]);
    }
  return {p, GMap::trusted(p, m, std::move(map))};
}

InjectiveHull injective_hull(const GModule& m) {
  require_p_group(m);
  const auto gens = dual_generators(m);
  GModule i = power_module(regular_module(m.group_ptr(), m.field()), gens.size());
  return {i, GMap::trusted(m, i, hull_matrix(m, gens))};
}

bool is_projective(const GModule& m) {
  require_p_group(m);
  const std::size_t top = m.dim() - radical_basis(m).cols();
  return m.dim() == top * m.group().order();
}

StrippedModule strip_projectives_split(const GModule& m) {
  require_p_group(m);
  const FieldSpec f = m.field();
  const std::size_t dim = m.dim();
  if (dim == 0) return {m, Matrix(f, 0, 0), Matrix(f, 0, 0), 0};
  const Matrix norm = norm_action(m);
  const auto nr = rref(norm);
  const std::size_t t = nr.rank;
  if (t == 0) return {m, Matrix::identity(f, dim), Matrix::identity(f, dim), 0};

  // Free summands are generated by vectors c_j whose norms are independent.
  const auto& g = m.group();
  const std::size_t order = g.order();
  const Matrix nc = norm.select_columns(nr.pivots);
  const Matrix lambda = left_inverse(nc);  // lambda * N c = I
  Matrix iota(f, dim, t * order);
  Matrix rho(f, t * order, dim);
  for (std::size_t j = 0; j < t; ++j)
    for (std::size_t h = 0; h < order; ++h) {
      const Matrix& a = m.element_action(h);
      for (std::size_t r = 0; r < dim; ++r) iota(r, j * order + h) = a(r, nr.pivots[j]);
      const Matrix row = lambda.select_rows(std::vector<std::size_t>{j}) *
                         m.element_action(g.inverse(h));
      std::copy_n(row.row(0).begin(), dim, rho.row(j * order + h).begin());
    }
  // rho is G-linear and rho * iota is invertible, so M = ker rho (+) im iota.
  const Matrix k = kernel_basis(rho);
  const auto inv = inverse(hstack(k, iota));
  if (!inv || k.cols() + t * order != dim)
    throw VerificationError("strip_projectives: free part does not split off");
  const Matrix projection = inv->block(0, 0, k.cols(), dim);
  auto sub = submodule(m, k);
  return {sub.module, k, projection, t};
}

GModule strip_projectives(const GModule& m) { return strip_projectives_split(m).module; }

GModule omega(const GModule& m) {
  auto cover = projective_cover(m);
  return strip_projectives(kernel_module(cover.map).module);
}

GModule sigma(const GModule& m) {
  require_p_group(m);
  return strip_projectives(sigma_raw(m).quotient.module);
}

std::vector<Scalar> HomQuotient::reduce(const Matrix& t) const {
  const auto c = coordinates.coords(t);
  if (to_quotient.rows() == 0) return {};
  return (to_quotient * Matrix::column_vector(t.field(), c)).column(0);
}

bool HomQuotient::is_null(const Matrix& t) const {
  const auto r = reduce(t);
  for (auto v : r)
    if (v) return false;
  return true;
}

Matrix induced_map(const HomQuotient& src, const HomQuotient& dst, const Matrix* pre,
                   const Matrix* post) {
  const FieldSpec f = src.homs.source.field();
  Matrix m(f, dst.dim(), src.dim());
  for (std::size_t j = 0; j < src.dim(); ++j) {
    Matrix t = src.representatives[j];
    if (pre) t = t * *pre;
    if (post) t = *post * t;
    const auto c = dst.reduce(t);
    for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
  }
  return m;
}

HomQuotient make_hom_quotient(HomBasis homs, const std::vector<std::vector<Scalar>>& null_coords) {
  const FieldSpec f = homs.source.field();
  HomCoordinates coords(homs);
  const std::size_t h = homs.dim();
  Subspace null(f, h);
  for (const auto& v : null_coords) null.insert(v);
  Matrix nb(f, h, null.dim());
  for (std::size_t j = 0; j < null.dim(); ++j)
    for (std::size_t i = 0; i < h; ++i) nb(i, j) = null.basis()[j][i];
  const auto comp = complement_coordinates(nb);
  Matrix full = hstack(nb, Matrix::identity(f, h).select_columns(comp));
  const Matrix inv = h ? *inverse(full) : Matrix(f, 0, 0);
  HomQuotient q{std::move(homs), std::move(coords), null.dim(),
                h ? inv.block(null.dim(), 0, comp.size(), h) : Matrix(f, 0, 0), {}};
  for (auto j : comp) q.representatives.push_back(q.homs.basis[j]);
  return q;
}

std::vector<std::vector<Scalar>> projective_hom_coords(const HomBasis& homs,
                                                       const HomCoordinates& coords) {
  std::vector<std::vector<Scalar>> out;
  if (homs.dim() == 0) return out;
  const GModule& x = homs.source;
  const GModule& y = homs.target;
  require_p_group(x);
  const auto& g = x.group();
  const FieldSpec f = x.field();
  const auto gens = dual_generators(x);
  const std::size_t dx = x.dim();
  std::vector<Scalar> entries(coords.dim());
  // Trace of the rank-one map e_l c_k^T: sum_h B(h) e_l c_k^T A(h^-1).
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t l = 0; l < y.dim(); ++l) {
      for (std::size_t i = 0; i < coords.dim(); ++i) {
        const std::size_t pos = coords.positions()[i];
        const std::size_t a = pos / dx, b = pos % dx;
        unsigned acc = 0;
        for (std::size_t h = 0; h < g.order(); ++h)
          acc += unsigned(y.element_action(h)(a, l)) *
                 x.element_action(g.inverse(h))(gens[k], b);
        entries[i] = static_cast<Scalar>(acc % f.p());
      }
      out.push_back(coords.coords_from_entries(entries));
    }
  return out;
}

std::vector<Matrix> projective_hom_spanning_set(const GModule& x, const GModule& y) {
  require_p_group(x);
  const auto& g = x.group();
  const auto gens = dual_generators(x);
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t l = 0; l < y.dim(); ++l) {
      Matrix t(x.field(), y.dim(), x.dim());
      for (std::size_t h = 0; h < g.order(); ++h) {
        const Matrix col = y.element_action(h).select_columns(std::vector<std::size_t>{l});
        const Matrix row =
            x.element_action(g.inverse(h)).select_rows(std::vector<std::size_t>{gens[k]});
        t = t + col * row;
      }
      out.push_back(std::move(t));
    }
  return out;
}

ProjectiveFactorization factors_through_projective(const GMap& f) {
  const GModule& x = f.source();
  const GModule& y = f.target();
  require_p_group(x);
  const FieldSpec fld = x.field();
  auto hull = injective_hull(x);
  const std::size_t order = x.group().order();
  const std::size_t r = hull.injective.dim() / std::max<std::size_t>(order, 1);

  auto witness_from = [&](const std::vector<Scalar>& a) {
    // a[(k, l)] are the coordinates of y_k = g(e_1 (x) k).
    Matrix gm(fld, y.dim(), hull.injective.dim());
    for (std::size_t k = 0; k < r; ++k) {
      std::vector<Scalar> yk(y.dim());
      for (std::size_t l = 0; l < y.dim(); ++l) yk[l] = a[k * y.dim() + l];
      const Matrix v = Matrix::column_vector(fld, yk);
      for (std::size_t h = 0; h < order; ++h)
        gm.set_block(0, k * order + h, y.element_action(h) * v);
    }
    return GMap::trusted(hull.injective, y, std::move(gm));
  };

  if (f.matrix().is_zero())
    return {true, witness_from(std::vector<Scalar>(r * y.dim(), 0))};
  const auto hb = hom_space(x, y);
  if (hb.dim() == 0) throw ModuleError("factors_through_projective: matrix is not a G-map");
  HomCoordinates coords(hb);
  const auto gens = projective_hom_coords(hb, coords);
  const auto target = coords.coords(f.matrix());
  auto a = solve_in_span(fld, gens, target);
  if (!a) return {false, std::nullopt};
  auto w = witness_from(*a);
  if (!(w.matrix() * hull.map.matrix() == f.matrix()))
    throw ModuleError("factors_through_projective: matrix is not a G-map");
  return {true, std::move(w)};
}

StableHom stable_hom(const GModule& m, const GModule& n) {
  require_p_group(m);
  auto hb = hom_space(m, n);
  HomCoordinates coords(hb);
  auto null = projective_hom_coords(hb, coords);
  return make_hom_quotient(std::move(hb), null);
}

StmodTriangle cone_st(const GMap& f) {
  const GModule& x = f.source();
  const GModule& y = f.target();
  require_p_group(x);
  auto raw_sigma = sigma_raw(x);
  const auto& hull = raw_sigma.hull;
  const std::size_t dy = y.dim(), di = hull.injective.dim();

  GModule yi = direct_sum_module(y, hull.injective);
  auto zq = quotient_module(yi, vstack(f.matrix(), hull.map.matrix()));
  const Matrix g_raw = zq.projection.block(0, 0, zq.module.dim(), dy);
  const Matrix pr_i = zq.section.block(dy, 0, di, zq.module.dim());
  const Matrix h_raw = raw_sigma.quotient.projection * pr_i;

  auto zs = strip_projectives_split(zq.module);
  auto ss = strip_projectives_split(raw_sigma.quotient.module);
  GMap g = GMap::trusted(y, zs.module, zs.projection * g_raw);
  GMap h = GMap::trusted(zs.module, ss.module, ss.projection * h_raw * zs.inclusion);
  return {x, y, zs.module, f, std::move(g), std::move(h)};
}

StableLes stable_les(const StmodTriangle& t, const GModule& w) {
  const StableHom hx = stable_hom(w, t.x), hy = stable_hom(w, t.y), hz = stable_hom(w, t.z);
  const Matrix fs = induced_map(hx, hy, nullptr, &t.f.matrix());
  const Matrix gs = induced_map(hy, hz, nullptr, &t.g.matrix());
  StableLes out{hx.dim(), hy.dim(), hz.dim(), false};
  out.exact = (gs * fs).is_zero() && rank(fs) + rank(gs) == hy.dim();
  return out;
}

Fibre fibre_st(const GMap& f) {
  const GModule& x = f.source();
  const GModule& y = f.target();
  require_p_group(x);
  auto cover = projective_cover(y);
  const std::size_t dx = x.dim();
  const Matrix k = kernel_basis(hstack(f.matrix(), cover.map.matrix()));
  auto w_raw = submodule(direct_sum_module(x, cover.projective), k);
  const Matrix u_raw = k.block(0, 0, dx, k.cols());

  auto om_raw = kernel_module(cover.map);
  // Omega Y sits in W as the vectors (0, e).
  const Matrix embedded = vstack(Matrix(x.field(), dx, om_raw.inclusion.cols()), om_raw.inclusion);
  auto c = solve(k, embedded);
  if (!c) throw VerificationError("fibre_st: Omega Y does not embed in the fibre");

  auto ws = strip_projectives_split(w_raw.module);
  auto os = strip_projectives_split(om_raw.module);
  GMap u = GMap::trusted(ws.module, x, u_raw * ws.inclusion);
  GMap from_omega = GMap::trusted(os.module, ws.module, ws.projection * *c * os.inclusion);
  return {ws.module, std::move(u), std::move(from_omega)};
}

GMap connecting_map(const GMap& f, const GMap& g) {
  const GModule& a = f.source();
  const GModule& b = f.target();
  const GModule& c = g.target();
  require_p_group(a);
  if (!(g.matrix() * f.matrix()).is_zero() || rank(f.matrix()) != a.dim() ||
      rank(g.matrix()) != c.dim() || a.dim() + c.dim() != b.dim())
    throw ModuleError("connecting_map: input is not a short exact sequence");
  const auto gens = dual_generators(a);
  const auto& grp = a.group();
  const std::size_t order = grp.order();
  // Extend the hull functionals of A along f to functionals on B.
  const Matrix fplus = left_inverse(f.matrix());
  const Matrix ext = fplus.select_rows(gens);
  Matrix psi(a.field(), gens.size() * order, b.dim());
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t h = 0; h < order; ++h) {
      const Matrix row = ext.select_rows(std::vector<std::size_t>{k}) *
                         b.element_action(grp.inverse(h));
      std::copy_n(row.row(0).begin(), b.dim(), psi.row(k * order + h).begin());
    }
  auto raw_sigma = sigma_raw(a);
  auto sec = solve(g.matrix(), Matrix::identity(a.field(), c.dim()));
  const Matrix delta_raw = raw_sigma.quotient.projection * psi * *sec;
  auto ss = strip_projectives_split(raw_sigma.quotient.module);
  return GMap::trusted(c, ss.module, ss.projection * delta_raw);
}

StmodTriangle ses_triangle(const GMap& f, const GMap& g) {
  auto delta = connecting_map(f, g);
  return {f.source(), f.target(), g.target(), f, g, std::move(delta)};
}

}  // namespace relstab
