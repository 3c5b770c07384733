#include "relstab/relative.hpp"

#include <random>

namespace relstab {

namespace {

Matrix zeros(FieldSpec f, std::size_t r, std::size_t c) { return Matrix(f, r, c); }

GModule empty_like(const GModule& m) { return zero_module(m.group_ptr(), m.field()); }

RelStripped empty_strip(const GModule& x) {
  return {empty_like(x), zeros(x.field(), x.dim(), 0), zeros(x.field(), 0, x.dim())};
}

// Coordinates of a spanning set of the contractible maps in Hom(X, Y).
std::vector<std::vector<Scalar>> contractible_coords(const RelCtx& ctx, const HomBasis& homs,
                                                     const HomCoordinates& coords) {
  std::vector<std::vector<Scalar>> out;
  if (homs.dim() == 0) return out;
  const GMap evy = ev_precover(ctx, homs.target);
  const auto through = hom_space(homs.source, evy.source());
  for (const auto& a : through.basis) out.push_back(coords.coords(evy.matrix() * a));
  for (auto& v : projective_hom_coords(homs, coords)) out.push_back(std::move(v));
  return out;
}

struct SigmaBRaw {
  GModule envelope;   // B^ (x) B (x) X (+) I(X)
  Matrix embedding;   // X -> envelope
  QuotientResult quotient;
  RelStripped strip;
};

SigmaBRaw sigma_b_raw(const RelCtx& ctx, const GModule& x) {
  const GMap u = coev_preenvelope(ctx, x);
  auto hull = injective_hull(x);
  GModule env = direct_sum_module(u.target(), hull.injective);
  Matrix emb = vstack(u.matrix(), hull.map.matrix());
  auto q = quotient_module(env, emb);
  auto s = strip_relative_split(ctx, q.module);
  return {std::move(env), std::move(emb), std::move(q), std::move(s)};
}

// Solver for relative inverses with the three quotients precomputed.
struct InverseSolver {
  const RelCtx& ctx;
  RelHom yx, xx, yy;

  std::optional<GMap> solve_for(const GMap& f) const {
    const FieldSpec fld = ctx.field;
    const GModule& x = f.source();
    const GModule& y = f.target();
    const std::size_t rows = xx.dim() + yy.dim();
    Matrix sys(fld, rows, yx.dim());
    for (std::size_t j = 0; j < yx.dim(); ++j) {
      const auto a = xx.reduce(yx.representatives[j] * f.matrix());
      const auto b = yy.reduce(f.matrix() * yx.representatives[j]);
      for (std::size_t i = 0; i < a.size(); ++i) sys(i, j) = a[i];
      for (std::size_t i = 0; i < b.size(); ++i) sys(xx.dim() + i, j) = b[i];
    }
    Matrix rhs(fld, rows, 1);
    const auto ra = xx.reduce(Matrix::identity(fld, x.dim()));
    const auto rb = yy.reduce(Matrix::identity(fld, y.dim()));
    for (std::size_t i = 0; i < ra.size(); ++i) rhs(i, 0) = ra[i];
    for (std::size_t i = 0; i < rb.size(); ++i) rhs(xx.dim() + i, 0) = rb[i];
    Matrix g(fld, x.dim(), y.dim());
    if (yx.dim() == 0) {
      if (!rhs.is_zero()) return std::nullopt;
    } else {
      auto c = solve(sys, rhs);
      if (!c) return std::nullopt;
      for (std::size_t j = 0; j < yx.dim(); ++j)
        if ((*c)(j, 0)) g = g + yx.representatives[j].scaled((*c)(j, 0));
    }
    GMap gm = GMap::trusted(y, x, g);
    const GMap gf = GMap::trusted(x, x, g * f.matrix() - Matrix::identity(fld, x.dim()));
    const GMap fg = GMap::trusted(y, y, f.matrix() * g - Matrix::identity(fld, y.dim()));
    if (!is_contractible(ctx, gf).contractible || !is_contractible(ctx, fg).contractible)
      throw VerificationError("rel_inverse: solved inverse fails verification");
    return gm;
  }
};

}  // namespace

RelCtx make_ctx(const GModule& b, const DecomposeOptions& options) {
  require_p_group(b);
  if (b.dim() == 0) throw ModuleError("make_ctx: B must be nonzero");
  const FieldSpec f = b.field();
  const std::size_t n = b.dim();
  GModule one = trivial_module(b.group_ptr(), f);
  GModule bdual = dual_module(b);
  Matrix c(f, n * n, 1), e(f, 1, n * n);
  for (std::size_t i = 0; i < n; ++i) {
    c(i * n + i, 0) = 1;
    e(0, i * n + i) = 1;
  }
  GMap coev(one, tensor_product(bdual, b), c);
  GMap ev(tensor_product(b, bdual), one, e);

  const Matrix id = Matrix::identity(f, n);
  if (!(kron(e, id) * kron(id, c)).is_identity() || !(kron(id, e) * kron(c, id)).is_identity())
    throw VerificationError("make_ctx: triangle identities fail");

  const GMap sym = symmetry_map(bdual, b);
  auto fib = fibre_st(compose(sym, coev));
  RelCtx ctx{b.group_ptr(), f,   b,       std::move(bdual), std::move(coev),
             std::move(ev), fib.w, fib.u, options};
  if (!is_stmod_zero(tensor_maps(GMap::identity(b), ctx.xib)))
    throw VerificationError("make_ctx: B (x) xi_B does not factor through a projective");
  return ctx;
}

GMap ev_precover(const RelCtx& ctx, const GModule& y) {
  require_compatible(ctx.b, y, "ev_precover");
  GModule src = tensor_product(ctx.ev.source(), y);
  return GMap::trusted(src, y, kron(ctx.ev.matrix(), Matrix::identity(ctx.field, y.dim())));
}

GMap coev_preenvelope(const RelCtx& ctx, const GModule& x) {
  require_compatible(ctx.b, x, "coev_preenvelope");
  GModule dst = tensor_product(ctx.coev.target(), x);
  return GMap::trusted(x, dst, kron(ctx.coev.matrix(), Matrix::identity(ctx.field, x.dim())));
}

Contractibility is_contractible(const RelCtx& ctx, const GMap& f) {
  require_compatible(ctx.b, f.source(), "is_contractible");
  require_compatible(ctx.b, f.target(), "is_contractible");
  const GModule& x = f.source();
  const GModule& y = f.target();
  const GMap evy = ev_precover(ctx, y);
  if (f.matrix().is_zero()) {
    auto hull = injective_hull(x);
    return {true, GMap::zero(x, evy.source()), GMap::zero(hull.injective, y)};
  }
  const auto homs = hom_space(x, y);
  if (homs.dim() == 0) throw ModuleError("is_contractible: matrix is not a G-map");
  HomCoordinates coords(homs);
  const auto through = hom_space(x, evy.source());
  std::vector<std::vector<Scalar>> vecs;
  for (const auto& a : through.basis) vecs.push_back(coords.coords(evy.matrix() * a));
  const std::size_t n_ev = vecs.size();
  for (auto& v : projective_hom_coords(homs, coords)) vecs.push_back(std::move(v));
  auto sol = solve_in_span(ctx.field, vecs, coords.coords(f.matrix()));
  if (!sol) return {};
  Matrix a(ctx.field, evy.source().dim(), x.dim());
  for (std::size_t i = 0; i < n_ev; ++i)
    if ((*sol)[i]) a = a + through.basis[i].scaled((*sol)[i]);
  const GMap rest = GMap::trusted(x, y, f.matrix() - evy.matrix() * a);
  auto proj = factors_through_projective(rest);
  if (!proj.factors) throw VerificationError("is_contractible: residual does not factor");
  return {true, GMap::trusted(x, evy.source(), std::move(a)), std::move(proj.through_hull)};
}

RelHom rel_hom(const RelCtx& ctx, const GModule& x, const GModule& y) {
  require_compatible(ctx.b, x, "rel_hom");
  require_compatible(ctx.b, y, "rel_hom");
  auto homs = hom_space(x, y);
  HomCoordinates coords(homs);
  auto null = contractible_coords(ctx, homs, coords);
  return make_hom_quotient(std::move(homs), null);
}

RelStripped strip_relative_split(const RelCtx& ctx, const GModule& x) {
  require_compatible(ctx.b, x, "strip_relative");
  auto ps = strip_projectives_split(x);
  if (ps.module.dim() == 0) return empty_strip(x);
  auto d = krull_schmidt(ps.module, ctx.options);
  std::vector<bool> keep(d.summands.size());
  for (std::size_t s = 0; s < d.summands.size(); ++s)
    keep[s] = !is_contractible(ctx, GMap::identity(d.summands[s].module)).contractible;
  std::vector<GModule> parts;
  Matrix incl(ctx.field, ps.module.dim(), 0), proj(ctx.field, 0, ps.module.dim());
  for (std::size_t blk = 0; blk < d.block_count(); ++blk) {
    const std::size_t s = d.block_summand[blk];
    if (!keep[s]) continue;
    parts.push_back(d.summands[s].module);
    incl = hstack(incl, d.block_inclusion(blk));
    proj = vstack(proj, d.block_projection(blk));
  }
  if (parts.empty()) return empty_strip(x);
  GModule m = parts.size() == 1 ? parts.front()
                                : direct_sum_module(x.group_ptr(), x.field(), parts);
  return {std::move(m), ps.inclusion * incl, proj * ps.projection};
}

GModule strip_relative(const RelCtx& ctx, const GModule& x) {
  return strip_relative_split(ctx, x).module;
}

GModule sigma_b(const RelCtx& ctx, const GModule& x) {
  if (x.dim() == 0) return x;
  return sigma_b_raw(ctx, x).strip.module;
}

GModule sigma_b_inv(const RelCtx& ctx, const GModule& x) {
  if (x.dim() == 0) return x;
  const GMap evx = ev_precover(ctx, x);
  auto cover = projective_cover(x);
  const Matrix k = kernel_basis(hstack(evx.matrix(), cover.map.matrix()));
  auto sub = submodule(direct_sum_module(evx.source(), cover.projective), k);
  return strip_relative(ctx, sub.module);
}

FbXi f_b_and_xi(const RelCtx& ctx) { return {ctx.fb, ctx.xib}; }

RelTriangle rel_cone(const RelCtx& ctx, const GMap& f) {
  const FieldSpec fld = ctx.field;
  auto xs = strip_relative_split(ctx, f.source());
  auto ys = strip_relative_split(ctx, f.target());
  GMap fs = GMap::trusted(xs.module, ys.module, ys.projection * f.matrix() * xs.inclusion);
  GModule fx = tensor_product(ctx.fb, xs.module);
  const Matrix xix = kron(ctx.xib.matrix(), Matrix::identity(fld, xs.module.dim()));
  auto t = cone_st(GMap::trusted(fx, ys.module, fs.matrix() * xix));
  auto zs = strip_relative_split(ctx, t.z);
  auto ss = strip_relative_split(ctx, t.h.target());
  GMap g = GMap::trusted(ys.module, zs.module, zs.projection * t.g.matrix());
  GMap h = GMap::trusted(zs.module, ss.module, ss.projection * t.h.matrix() * zs.inclusion);
  return {xs.module, ys.module, zs.module, std::move(fs), std::move(g), std::move(h), "rel_cone"};
}

RelTriangle image_triangle(const RelCtx& ctx, const GMap& f, const GMap& g) {
  const FieldSpec fld = ctx.field;
  const GModule& a = f.source();
  const GModule& bm = f.target();
  const GModule& c = g.target();
  const GMap delta = connecting_map(f, g);
  if (!is_stmod_zero(tensor_maps(GMap::identity(ctx.b), delta)))
    throw VerificationError(
        "image_triangle: sequence is not B-split (B (x) h does not factor through a projective)");

  // Push the sequence out along the preenvelope A -> E'; the pushed-out
  // sequence E' -> W -> C splits, and W -> E'/A gives the third map.
  auto sb = sigma_b_raw(ctx, a);
  const std::size_t de = sb.envelope.dim(), db = bm.dim();
  GModule w = direct_sum_module(bm, sb.envelope);
  auto wq = quotient_module(w, vstack(f.matrix(), zeros(fld, de, a.dim()) - sb.embedding));
  const Matrix to_c = hstack(g.matrix(), zeros(fld, c.dim(), de)) * wq.section;
  const Matrix to_sigma =
      sb.quotient.projection * hstack(zeros(fld, de, db), Matrix::identity(fld, de)) * wq.section;

  const auto homs = hom_space(c, wq.module);
  Matrix sys(fld, c.dim() * c.dim(), homs.dim());
  for (std::size_t j = 0; j < homs.dim(); ++j) {
    const auto v = flatten(to_c * homs.basis[j]);
    for (std::size_t i = 0; i < v.size(); ++i) sys(i, j) = v[i];
  }
  const auto target = flatten(Matrix::identity(fld, c.dim()));
  auto coeffs = solve(sys, Matrix::column_vector(fld, target));
  if (!coeffs) throw VerificationError("image_triangle: pushed-out sequence does not split");
  Matrix s(fld, wq.module.dim(), c.dim());
  for (std::size_t j = 0; j < homs.dim(); ++j)
    if ((*coeffs)(j, 0)) s = s + homs.basis[j].scaled((*coeffs)(j, 0));

  auto as = strip_relative_split(ctx, a);
  auto bs = strip_relative_split(ctx, bm);
  auto cs = strip_relative_split(ctx, c);
  GMap fs = GMap::trusted(as.module, bs.module, bs.projection * f.matrix() * as.inclusion);
  GMap gs = GMap::trusted(bs.module, cs.module, cs.projection * g.matrix() * bs.inclusion);
  GMap hs = GMap::trusted(cs.module, sb.strip.module,
                          sb.strip.projection * to_sigma * s * cs.inclusion);
  return {as.module, bs.module, cs.module, std::move(fs), std::move(gs), std::move(hs),
          "image_triangle"};
}

RelTriangle image_triangle(const RelCtx& ctx, const GMap& f) {
  auto hull = injective_hull(f.source());
  GModule yi = direct_sum_module(f.target(), hull.injective);
  const Matrix emb = vstack(f.matrix(), hull.map.matrix());
  auto q = quotient_module(yi, emb);
  return image_triangle(ctx, GMap::trusted(f.source(), yi, emb),
                        GMap::trusted(yi, q.module, q.projection));
}

std::optional<GMap> rel_inverse(const RelCtx& ctx, const GMap& f) {
  const GModule& x = f.source();
  const GModule& y = f.target();
  InverseSolver solver{ctx, rel_hom(ctx, y, x), rel_hom(ctx, x, x), rel_hom(ctx, y, y)};
  return solver.solve_for(f);
}

bool is_rel_iso(const RelCtx& ctx, const GMap& f) { return rel_inverse(ctx, f).has_value(); }

bool stable_b_iso(const RelCtx& ctx, const GModule& x, const GModule& y) {
  return is_isomorphic(strip_relative(ctx, x), strip_relative(ctx, y), ctx.options).isomorphic;
}

RelIsoSearch find_rel_iso(const RelCtx& ctx, const GModule& x, const GModule& y) {
  InverseSolver solver{ctx, rel_hom(ctx, y, x), rel_hom(ctx, x, x), rel_hom(ctx, y, y)};
  if (solver.xx.dim() != solver.yy.dim()) return {std::nullopt, true};
  const RelHom xy = rel_hom(ctx, x, y);
  const std::size_t d = xy.dim();
  const unsigned p = ctx.field.p();
  auto map_from = [&](const std::vector<Scalar>& c) {
    Matrix m(ctx.field, y.dim(), x.dim());
    for (std::size_t j = 0; j < d; ++j)
      if (c[j]) m = m + xy.representatives[j].scaled(c[j]);
    return GMap::trusted(x, y, std::move(m));
  };
  double count = 1;
  for (std::size_t i = 0; i < d && count <= 65536; ++i) count *= p;
  std::vector<Scalar> c(d, 0);
  if (count <= 65536) {
    for (;;) {
      const GMap f = map_from(c);
      if (auto g = solver.solve_for(f)) return {f, true};
      std::size_t i = 0;
      while (i < d && ++c[i] == p) c[i++] = 0;
      if (i == d) break;
    }
    return {std::nullopt, true};
  }
  std::mt19937_64 rng(ctx.options.seed * 0x9E3779B97F4A7C15ull + d);
  for (std::size_t trial = 0; trial < 64 * d; ++trial) {
    for (auto& v : c) v = static_cast<Scalar>(rng() % p);
    const GMap f = map_from(c);
    if (solver.solve_for(f)) return {f, false};
  }
  return {std::nullopt, false};
}

bool LesReport::all_exact() const {
  for (const auto& p : positions)
    if (!p.exact) return false;
  return true;
}

LesReport check_les(const RelCtx& ctx, const RelTriangle& t, const GModule& w) {
  LesReport report;
  const GModule& sx = t.h.target();
  auto position = [](std::string name, const Matrix& first, const Matrix& second,
                     std::size_t left, std::size_t middle, std::size_t right) {
    const bool exact =
        (second * first).is_zero() && rank(first) + rank(second) == middle;
    return LesPosition{std::move(name), left, middle, right, exact};
  };
  {
    const RelHom hx = rel_hom(ctx, w, t.x), hy = rel_hom(ctx, w, t.y), hz = rel_hom(ctx, w, t.z),
                 hs = rel_hom(ctx, w, sx);
    const Matrix fs = induced_map(hx, hy, nullptr, &t.f.matrix());
    const Matrix gs = induced_map(hy, hz, nullptr, &t.g.matrix());
    const Matrix hh = induced_map(hz, hs, nullptr, &t.h.matrix());
    report.positions.push_back(position("Rel(W,X)->Rel(W,Y)->Rel(W,Z)", fs, gs, hx.dim(),
                                        hy.dim(), hz.dim()));
    report.positions.push_back(position("Rel(W,Y)->Rel(W,Z)->Rel(W,SX)", gs, hh, hy.dim(),
                                        hz.dim(), hs.dim()));
  }
  {
    const RelHom cz = rel_hom(ctx, t.z, w), cy = rel_hom(ctx, t.y, w), cx = rel_hom(ctx, t.x, w);
    const Matrix gst = induced_map(cz, cy, &t.g.matrix(), nullptr);
    const Matrix fst = induced_map(cy, cx, &t.f.matrix(), nullptr);
    report.positions.push_back(position("Rel(Z,W)->Rel(Y,W)->Rel(X,W)", gst, fst, cz.dim(),
                                        cy.dim(), cx.dim()));
  }
  return report;
}

}  // namespace relstab
