#include "relstab/module.hpp"

#include <algorithm>

namespace relstab {

namespace {

std::uint64_t fnv(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Columns A_h m_k for all generators m_k (as coordinates) and elements h,
// column index k * |G| + h.
Matrix orbit_matrix(const GModule& m, const std::vector<std::size_t>& gens) {
  const std::size_t order = m.group().order();
  Matrix p(m.field(), m.dim(), gens.size() * order);
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t h = 0; h < order; ++h) {
      const Matrix& a = m.element_action(h);
      for (std::size_t r = 0; r < m.dim(); ++r) p(r, k * order + h) = a(r, gens[k]);
    }
  return p;
}

// Intertwiners source -> target, parametrised by the images of the module
// generators of `source` and constrained by module generators of the
// relation module.
std::vector<Matrix> hom_direct(const GModule& source, const GModule& target,
                               const std::vector<std::size_t>& gens) {
  const FieldSpec f = source.field();
  const auto& grp = source.group();
  const std::size_t order = grp.order(), r = gens.size(), dm = source.dim(),
                    dn = target.dim();

  const Matrix pmat = orbit_matrix(source, gens);
  const auto pr = rref(pmat);
  if (pr.rank != dm) throw VerificationError("hom_space: generators do not span the module");
  const auto sinv = inverse(pmat.select_columns(pr.pivots));
  const Matrix rel = kernel_basis(pmat);

  // Module generators of the relation module inside kG^r.
  std::vector<std::vector<Scalar>> relgens;
  Subspace spun(f, r * order);
  std::vector<Scalar> moved(r * order);
  for (std::size_t c = 0; c < rel.cols() && spun.dim() < rel.cols(); ++c) {
    const auto rho = rel.column(c);
    if (spun.contains(rho)) continue;
    relgens.push_back(rho);
    for (std::size_t g = 0; g < order; ++g) {
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t h = 0; h < order; ++h)
          moved[k * order + grp.mul(g, h)] = rho[k * order + h];
      spun.insert(moved);
    }
  }

  const std::size_t unknowns = r * dn;
  auto relation_block = [&](const std::vector<Scalar>& rho) {
    Matrix blk(f, dn, unknowns);
    for (std::size_t k = 0; k < r; ++k) {
      Matrix c(f, dn, dn);
      bool any = false;
      for (std::size_t h = 0; h < order; ++h) {
        const Scalar coeff = rho[k * order + h];
        if (!coeff) continue;
        c = c + target.element_action(h).scaled(coeff);
        any = true;
      }
      if (any) blk.set_block(0, k * dn, c);
    }
    return blk;
  };

  Matrix sol(f, unknowns, 0);
  if (relgens.size() * dn <= kMaxMatrixDim) {
    Matrix sys(f, relgens.size() * dn, unknowns);
    for (std::size_t i = 0; i < relgens.size(); ++i)
      sys.set_block(i * dn, 0, relation_block(relgens[i]));
    sol = kernel_basis(sys);
  } else {
    Subspace rows(f, unknowns);
    for (const auto& rho : relgens) {
      const Matrix blk = relation_block(rho);
      for (std::size_t i = 0; i < dn; ++i) rows.insert(blk.row(i));
    }
    sol = kernel_of_rows(rows);
  }

  std::vector<Matrix> out;
  out.reserve(sol.cols());
  for (std::size_t j = 0; j < sol.cols(); ++j) {
    Matrix v(f, dn, dm);
    for (std::size_t i = 0; i < dm; ++i) {
      const std::size_t col = pr.pivots[i];
      const std::size_t k = col / order, h = col % order;
      const Matrix& b = target.element_action(h);
      for (std::size_t row = 0; row < dn; ++row) {
        unsigned acc = 0;
        for (std::size_t t = 0; t < dn; ++t) acc += unsigned(b(row, t)) * sol(k * dn + t, j);
        v(row, i) = static_cast<Scalar>(acc % f.p());
      }
    }
    out.push_back(v * *sinv);
  }
  return out;
}

}  // namespace

std::shared_ptr<GModule::Data> GModule::make_data(GroupPtr group, FieldSpec field,
                                                  std::size_t dim, std::vector<Matrix> actions) {
  return std::make_shared<Data>(std::move(group), field, dim, std::move(actions));
}

GModule::GModule(GroupPtr group, FieldSpec field, std::size_t dim, std::vector<Matrix> actions)
    : d_() {
  if (!group) throw ModuleError("module requires a group");
  if (actions.size() != group->num_generators())
    throw ModuleError("expected " + std::to_string(group->num_generators()) +
                      " generator matrices, got " + std::to_string(actions.size()));
  for (std::size_t s = 0; s < actions.size(); ++s) {
    const Matrix& a = actions[s];
    if (a.field() != field) throw ModuleError("generator " + std::to_string(s) + ": field mismatch");
    if (a.rows() != dim || a.cols() != dim)
      throw ModuleError("generator " + std::to_string(s) + ": expected " + std::to_string(dim) +
                        "x" + std::to_string(dim) + " matrix");
    if (rank(a) != dim)
      throw ModuleError("generator " + std::to_string(s) + ": matrix is not invertible");
  }
  auto d = make_data(std::move(group), field, dim, std::move(actions));
  d_ = d;
  const auto& g = *d_->group;
  for (std::size_t e = 0; e < g.order(); ++e)
    for (std::size_t s = 0; s < g.num_generators(); ++s) {
      const std::size_t se = g.mul(g.generator_element(s), e);
      if (!(d_->actions[s] * element_action(e) == element_action(se)))
        throw ModuleError("relation violated at table entry (generator " + std::to_string(s) +
                          ", element " + std::to_string(e) + ") -> element " +
                          std::to_string(se));
    }
}

GModule GModule::trusted(GroupPtr group, FieldSpec field, std::size_t dim,
                         std::vector<Matrix> actions, std::vector<Matrix> element_actions) {
  auto d = make_data(std::move(group), field, dim, std::move(actions));
  if (!element_actions.empty()) {
    d->elements = std::move(element_actions);
    std::call_once(d->elements_once, [] {});
  }
  return GModule(std::move(d));
}

const Matrix& GModule::element_action(std::size_t e) const {
  std::call_once(d_->elements_once, [this] {
    const auto& g = *d_->group;
    std::vector<Matrix> els;
    els.reserve(g.order());
    els.push_back(Matrix::identity(d_->field, d_->dim));
    for (std::size_t i = 1; i < g.order(); ++i)
      els.push_back(d_->actions[g.last_generator(i)] * els[g.parent(i)]);
    d_->elements = std::move(els);
  });
  return d_->elements.at(e);
}

bool GModule::compatible(const GModule& other) const {
  return field() == other.field() && same_group(group_ptr(), other.group_ptr());
}

bool operator==(const GModule& a, const GModule& b) {
  return a.compatible(b) && a.dim() == b.dim() && a.actions() == b.actions();
}

GModule build_module(GroupPtr group, FieldSpec field, std::vector<Matrix> actions) {
  if (actions.empty())
    throw ModuleError("build_module: cannot infer the dimension without generator matrices");
  const std::size_t dim = actions.front().rows();
  return GModule(std::move(group), field, dim, std::move(actions));
}

void require_compatible(const GModule& a, const GModule& b, const char* what) {
  if (a.field() != b.field())
    throw ModuleError(std::string(what) + ": modules over different fields");
  if (!same_group(a.group_ptr(), b.group_ptr()))
    throw ModuleError(std::string(what) + ": modules over different groups");
}

std::uint64_t module_hash(const GModule& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv(h, m.field().p());
  h = fnv(h, m.dim());
  for (const auto& a : m.actions())
    for (auto v : a.data()) h = fnv(h, v);
  return h;
}

bool is_intertwiner(const GModule& source, const GModule& target, const Matrix& m) {
  if (!source.compatible(target) || m.field() != source.field()) return false;
  if (m.rows() != target.dim() || m.cols() != source.dim()) return false;
  for (std::size_t s = 0; s < source.group().num_generators(); ++s)
    if (!(target.action(s) * m == m * source.action(s))) return false;
  return true;
}

GMap::GMap(GModule source, GModule target, Matrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  require_compatible(source_, target_, "GMap");
  if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
    throw ModuleError("GMap: matrix is " + std::to_string(matrix_.rows()) + "x" +
                      std::to_string(matrix_.cols()) + ", expected " +
                      std::to_string(target_.dim()) + "x" + std::to_string(source_.dim()));
  if (!is_intertwiner(source_, target_, matrix_))
    throw ModuleError("GMap: matrix does not intertwine the actions");
}

GMap::GMap(Trusted, GModule source, GModule target, Matrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {}

GMap GMap::trusted(GModule source, GModule target, Matrix matrix) {
  return GMap(Trusted{}, std::move(source), std::move(target), std::move(matrix));
}

GMap GMap::identity(const GModule& m) {
  return trusted(m, m, Matrix::identity(m.field(), m.dim()));
}

GMap GMap::zero(const GModule& source, const GModule& target) {
  return trusted(source, target, Matrix(source.field(), target.dim(), source.dim()));
}

GMap compose(const GMap& g, const GMap& f) {
  if (g.source().dim() != f.target().dim())
    throw DimensionError("compose: source of g does not match target of f");
  return GMap::trusted(f.source(), g.target(), g.matrix() * f.matrix());
}

GMap tensor_maps(const GMap& f, const GMap& g) {
  return GMap::trusted(tensor_product(f.source(), g.source()),
                       tensor_product(f.target(), g.target()), kron(f.matrix(), g.matrix()));
}

GMap direct_sum_maps(const GMap& f, const GMap& g) {
  return GMap::trusted(direct_sum_module(f.source(), g.source()),
                       direct_sum_module(f.target(), g.target()),
                       block_diag(f.matrix(), g.matrix()));
}

GMap add_maps(const GMap& f, const GMap& g) {
  return GMap::trusted(f.source(), f.target(), f.matrix() + g.matrix());
}

Matrix HomBasis::combination(std::span<const Scalar> coeffs) const {
  Matrix m(source.field(), target.dim(), source.dim());
  for (std::size_t i = 0; i < basis.size() && i < coeffs.size(); ++i)
    if (coeffs[i]) m = m + basis[i].scaled(coeffs[i]);
  return m;
}

HomBasis hom_space(const GModule& source, const GModule& target) {
  require_compatible(source, target, "hom_space");
  HomBasis hb{source, target, {}};
  if (source.dim() == 0 || target.dim() == 0) return hb;
  const auto gens = generator_coordinates(source);
  const GModule tdual = dual_module(target);
  const auto dual_gens = generator_coordinates(tdual);
  if (gens.size() * target.dim() <= dual_gens.size() * source.dim()) {
    hb.basis = hom_direct(source, target, gens);
  } else {
    // Hom(M, N) is the transpose of Hom(N^, M^).
    for (auto& t : hom_direct(tdual, dual_module(source), dual_gens))
      hb.basis.push_back(t.transpose());
  }
  return hb;
}

HomCoordinates::HomCoordinates(const HomBasis& hb) : rinv_(hb.source.field(), 0, 0) {
  const FieldSpec f = hb.source.field();
  const std::size_t d = hb.dim();
  if (d == 0) return;
  Subspace s(f, hb.basis.front().data().size());
  for (const auto& b : hb.basis) s.insert(b.data());
  positions_ = s.pivots();
  Matrix r(f, d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) r(i, j) = hb.basis[j].data()[positions_[i]];
  rinv_ = *inverse(r);
}

std::vector<Scalar> HomCoordinates::coords(const Matrix& t) const {
  std::vector<Scalar> e(dim());
  for (std::size_t i = 0; i < dim(); ++i) e[i] = t.data()[positions_[i]];
  return coords_from_entries(e);
}

std::vector<Scalar> HomCoordinates::coords_from_entries(std::span<const Scalar> entries) const {
  if (dim() == 0) return {};
  return (rinv_ * Matrix::column_vector(rinv_.field(), entries)).column(0);
}

std::optional<std::vector<Scalar>> solve_in_span(FieldSpec field,
                                                 const std::vector<std::vector<Scalar>>& vectors,
                                                 std::span<const Scalar> target) {
  const std::size_t n = target.size();
  std::vector<Scalar> out(vectors.size(), 0);
  if (n == 0) return out;
  // Keep an independent subset, then solve a square-ish system on it.
  Subspace span(field, n);
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < vectors.size() && span.dim() < n; ++i)
    if (span.insert(vectors[i])) chosen.push_back(i);
  Matrix a(field, n, chosen.size());
  for (std::size_t j = 0; j < chosen.size(); ++j)
    for (std::size_t r = 0; r < n; ++r) a(r, j) = vectors[chosen[j]][r];
  auto x = solve(a, Matrix::column_vector(field, target));
  if (!x) return std::nullopt;
  for (std::size_t j = 0; j < chosen.size(); ++j) out[chosen[j]] = (*x)(j, 0);
  return out;
}

GModule zero_module(const GroupPtr& group, FieldSpec field) {
  return GModule::trusted(group, field, 0,
                          std::vector<Matrix>(group->num_generators(), Matrix(field, 0, 0)),
                          std::vector<Matrix>(group->order(), Matrix(field, 0, 0)));
}

GModule trivial_module(const GroupPtr& group, FieldSpec field) {
  const Matrix one = Matrix::identity(field, 1);
  return GModule::trusted(group, field, 1, std::vector<Matrix>(group->num_generators(), one),
                          std::vector<Matrix>(group->order(), one));
}

GModule regular_module(const GroupPtr& group, FieldSpec field) {
  const auto& g = *group;
  const std::size_t n = g.order();
  std::vector<Matrix> els;
  els.reserve(n);
  for (std::size_t e = 0; e < n; ++e) {
    Matrix m(field, n, n);
    for (std::size_t h = 0; h < n; ++h) m(g.mul(e, h), h) = 1;
    els.push_back(std::move(m));
  }
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < g.num_generators(); ++s) gens.push_back(els[g.generator_element(s)]);
  return GModule::trusted(group, field, n, std::move(gens), std::move(els));
}

GModule perm_on_cosets(const Subgroup& h, FieldSpec field) {
  return induce_module(trivial_module(h.group, field), h);
}

GModule tensor_product(const GModule& m, const GModule& n) {
  require_compatible(m, n, "tensor_product");
  const auto& g = m.group();
  std::vector<Matrix> els;
  els.reserve(g.order());
  for (std::size_t e = 0; e < g.order(); ++e)
    els.push_back(kron(m.element_action(e), n.element_action(e)));
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < g.num_generators(); ++s) gens.push_back(els[g.generator_element(s)]);
  return GModule::trusted(m.group_ptr(), m.field(), m.dim() * n.dim(), std::move(gens),
                          std::move(els));
}

GModule dual_module(const GModule& m) {
  const auto& g = m.group();
  std::vector<Matrix> els;
  els.reserve(g.order());
  for (std::size_t e = 0; e < g.order(); ++e)
    els.push_back(m.element_action(g.inverse(e)).transpose());
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < g.num_generators(); ++s) gens.push_back(els[g.generator_element(s)]);
  return GModule::trusted(m.group_ptr(), m.field(), m.dim(), std::move(gens), std::move(els));
}

GModule direct_sum_module(const GModule& m, const GModule& n) {
  require_compatible(m, n, "direct_sum_module");
  const auto& g = m.group();
  std::vector<Matrix> els;
  els.reserve(g.order());
  for (std::size_t e = 0; e < g.order(); ++e)
    els.push_back(block_diag(m.element_action(e), n.element_action(e)));
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < g.num_generators(); ++s) gens.push_back(els[g.generator_element(s)]);
  return GModule::trusted(m.group_ptr(), m.field(), m.dim() + n.dim(), std::move(gens),
                          std::move(els));
}

GModule direct_sum_module(const GroupPtr& group, FieldSpec field,
                          const std::vector<GModule>& parts) {
  std::size_t dim = 0;
  for (const auto& p : parts) {
    if (p.field() != field || !same_group(p.group_ptr(), group))
      throw ModuleError("direct_sum_module: summand over a different group or field");
    dim += p.dim();
  }
  const auto& g = *group;
  std::vector<Matrix> els;
  els.reserve(g.order());
  for (std::size_t e = 0; e < g.order(); ++e) {
    Matrix a(field, dim, dim);
    std::size_t off = 0;
    for (const auto& p : parts) {
      a.set_block(off, off, p.element_action(e));
      off += p.dim();
    }
    els.push_back(std::move(a));
  }
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < g.num_generators(); ++s) gens.push_back(els[g.generator_element(s)]);
  return GModule::trusted(group, field, dim, std::move(gens), std::move(els));
}

GModule power_module(const GModule& m, std::size_t count) {
  return direct_sum_module(m.group_ptr(), m.field(), std::vector<GModule>(count, m));
}

GModule restrict_module(const GModule& m, const Subgroup& h) {
  if (!same_group(m.group_ptr(), h.parent))
    throw ModuleError("restrict: module is not over the parent group of the subgroup");
  std::vector<Matrix> gens, els;
  for (auto e : h.generator_elements) gens.push_back(m.element_action(e));
  for (auto e : h.embedding) els.push_back(m.element_action(e));
  return GModule::trusted(h.group, m.field(), m.dim(), std::move(gens), std::move(els));
}

GModule induce_module(const GModule& m, const Subgroup& h) {
  if (!same_group(m.group_ptr(), h.group))
    throw ModuleError("induce: module is not over the subgroup");
  const auto& g = *h.parent;
  const auto reps = coset_transversal(h);
  const std::size_t n = reps.size(), d = m.dim();
  std::vector<std::size_t> coset_of(g.order());
  for (std::size_t j = 0; j < n; ++j)
    for (auto x : h.embedding) coset_of[g.mul(reps[j], x)] = j;

  auto action_of = [&](std::size_t s) {
    Matrix a(m.field(), n * d, n * d);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t x = g.mul(s, reps[i]);
      const std::size_t j = coset_of[x];
      const std::size_t hh = g.mul(g.inverse(reps[j]), x);
      a.set_block(j * d, i * d, m.element_action(*h.local_index(hh)));
    }
    return a;
  };
  std::vector<Matrix> els;
  els.reserve(g.order());
  for (std::size_t e = 0; e < g.order(); ++e) els.push_back(action_of(e));
  std::vector<Matrix> gens;
  for (std::size_t s = 0; s < g.num_generators(); ++s) gens.push_back(els[g.generator_element(s)]);
  return GModule::trusted(h.parent, m.field(), n * d, std::move(gens), std::move(els));
}

Matrix swap_matrix(FieldSpec field, std::size_t dim_m, std::size_t dim_n) {
  Matrix p(field, dim_m * dim_n, dim_m * dim_n);
  for (std::size_t i = 0; i < dim_m; ++i)
    for (std::size_t j = 0; j < dim_n; ++j) p(j * dim_m + i, i * dim_n + j) = 1;
  return p;
}

GMap symmetry_map(const GModule& m, const GModule& n) {
  return GMap::trusted(tensor_product(m, n), tensor_product(n, m),
                       swap_matrix(m.field(), m.dim(), n.dim()));
}

Matrix group_algebra_action(const GModule& m, std::span<const Scalar> coeffs) {
  Matrix out(m.field(), m.dim(), m.dim());
  for (std::size_t h = 0; h < coeffs.size(); ++h)
    if (coeffs[h]) out = out + m.element_action(h).scaled(coeffs[h]);
  return out;
}

Matrix norm_action(const GModule& m) {
  const std::vector<Scalar> ones(m.group().order(), 1);
  return group_algebra_action(m, ones);
}

SubmoduleResult submodule(const GModule& m, const Matrix& basis) {
  if (basis.rows() != m.dim()) throw DimensionError("submodule: basis has the wrong length");
  if (rank(basis) != basis.cols()) throw ModuleError("submodule: basis is not independent");
  std::vector<Matrix> gens;
  for (const auto& a : m.actions()) {
    auto x = solve(basis, a * basis);
    if (!x) throw ModuleError("submodule: subspace is not G-invariant");
    gens.push_back(std::move(*x));
  }
  return {GModule::trusted(m.group_ptr(), m.field(), basis.cols(), std::move(gens)), basis};
}

QuotientResult quotient_module(const GModule& m, const Matrix& sub) {
  const FieldSpec f = m.field();
  const Matrix sb = column_basis(sub);
  const auto comp = complement_coordinates(sb);
  const Matrix section = Matrix::identity(f, m.dim()).select_columns(comp);
  const auto full_inv = inverse(hstack(sb, section));
  const Matrix projection = full_inv->block(sb.cols(), 0, comp.size(), m.dim());
  std::vector<Matrix> gens;
  for (const auto& a : m.actions()) gens.push_back(projection * a * section);
  auto q = GModule::trusted(m.group_ptr(), f, comp.size(), std::move(gens));
  return {std::move(q), projection, section};
}

SubmoduleResult kernel_module(const GMap& f) {
  return submodule(f.source(), kernel_basis(f.matrix()));
}

QuotientResult cokernel_module(const GMap& f) { return quotient_module(f.target(), f.matrix()); }

Matrix radical_basis(const GModule& m) {
  if (m.dim() == 0 || m.actions().empty()) return Matrix(m.field(), m.dim(), 0);
  std::vector<Matrix> parts;
  const Matrix id = Matrix::identity(m.field(), m.dim());
  for (const auto& a : m.actions()) parts.push_back(a - id);
  return column_basis(hstack(m.field(), m.dim(), parts));
}

std::vector<std::size_t> generator_coordinates(const GModule& m) {
  if (m.group().is_p_group(m.field().p())) return complement_coordinates(radical_basis(m));
  std::vector<std::size_t> gens;
  Subspace span(m.field(), m.dim());
  for (std::size_t j = 0; j < m.dim() && span.dim() < m.dim(); ++j) {
    std::vector<Scalar> e(m.dim(), 0);
    e[j] = 1;
    if (span.contains(e)) continue;
    gens.push_back(j);
    for (std::size_t h = 0; h < m.group().order(); ++h) span.insert(m.element_action(h).column(j));
  }
  return gens;
}

}  // namespace relstab
