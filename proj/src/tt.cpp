#include "relstab/tt.hpp"

#include <algorithm>
#include <utility>

namespace relstab {

namespace {

bool is_cyclic(const FiniteGroup& g) {
  for (std::size_t e = 0; e < g.order(); ++e)
    if (g.element_order(e) == g.order()) return true;
  return false;
}

// Members grouped for isomorphism lookup.
struct MemberSet {
  std::vector<GModule> members;
  std::vector<ModuleKey> keys;

  bool contains(const GModule& m, const ModuleKey& key) const {
    for (std::size_t i = 0; i < members.size(); ++i)
      if (keys[i] == key && indecomposable_iso(members[i], m)) return true;
    return false;
  }
  bool insert(const GModule& m) {
    auto key = module_key(m);
    if (contains(m, key)) return false;
    members.push_back(m);
    keys.push_back(std::move(key));
    return true;
  }
};

bool subset(const std::vector<Point>& a, const std::vector<Point>& b) {
  for (const auto& x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) return false;
  return true;
}

}  // namespace

XiTower::XiTower(RelCtx ctx) : ctx_(std::move(ctx)) {
  modules_.push_back(ctx_.fb);
  maps_.push_back(ctx_.xib);
}

void XiTower::extend(unsigned n) {
  if (n == 0) throw Error("XiTower: powers start at 1");
  while (modules_.size() < n) {
    const GModule& last = modules_.back();
    GModule raw = tensor_product(ctx_.fb, last);
    const Matrix xi_raw = kron(ctx_.xib.matrix(), maps_.back().matrix());
    auto s = strip_projectives_split(raw);
    maps_.push_back(GMap::trusted(s.module, ctx_.xib.target(), xi_raw * s.inclusion));
    modules_.push_back(std::move(s.module));
  }
}

const GModule& XiTower::module(unsigned n) {
  extend(n);
  return modules_[n - 1];
}

const GMap& XiTower::map(unsigned n) {
  extend(n);
  return maps_[n - 1];
}

GMap XiTower::tensored(unsigned n, const GModule& x) {
  extend(n);
  GModule src = tensor_product(modules_[n - 1], x);
  return GMap::trusted(src, x, kron(maps_[n - 1].matrix(), Matrix::identity(x.field(), x.dim())));
}

std::optional<std::size_t> XiTower::module_dim(unsigned n, std::size_t limit) {
  if (n == 0) throw Error("XiTower: powers start at 1");
  for (unsigned k = 1; k <= n; ++k) {
    if (k > modules_.size() && ctx_.fb.dim() * modules_.back().dim() > 2 * limit + ctx_.fb.dim())
      return std::nullopt;
    if (module(k).dim() > limit) return std::nullopt;
  }
  return modules_[n - 1].dim();
}

void XiTower::init_restrictions() {
  restricted_.emplace();
  const auto& g = *ctx_.group;
  const unsigned p = ctx_.field.p();
  if (g.order() == p) return;
  for (std::size_t e = 1; e < g.order(); ++e) {
    if (g.element_order(e) != p) continue;
    bool seen = false;
    for (const auto& r : *restricted_)
      if (r.sub.contains(e)) seen = true;
    if (seen) continue;
    Subgroup sub = make_subgroup(ctx_.group, {e});
    std::shared_ptr<XiTower> tower;
    try {
      tower = std::make_shared<XiTower>(make_ctx(restrict_module(ctx_.b, sub), ctx_.options));
    } catch (const VerificationError&) {
    }
    restricted_->push_back({e, std::move(sub), std::move(tower)});
  }
}

std::optional<std::size_t> XiTower::restriction_witness(const GModule& x, unsigned n, bool relative) {
  if (!restricted_) init_restrictions();
  for (auto& r : *restricted_) {
    if (!r.tower) continue;
    if (r.tower->module(1).dim() == 0) continue;
    const GModule xr = restrict_module(x, r.sub);
    if (is_projective(xr)) continue;
    try {
      if (!r.tower->module_dim(n, witness_dim_limit)) continue;
      const GMap f = r.tower->tensored(n, xr);
      const bool vanishes =
          relative ? is_contractible(r.tower->ctx(), f).contractible : is_stmod_zero(f);
      if (!vanishes) return r.element;
    } catch (const DimensionError&) {
    }
  }
  return std::nullopt;
}

NilpotenceResult nilpotence_order(XiTower& tower, const GModule& x, unsigned cap) {
  if (cap == 0) throw Error("nilpotence_order: cap must be at least 1");
  NilpotenceResult out;
  out.cap = cap;
  if ((out.witness_element = tower.restriction_witness(x, cap, false))) return out;
  for (unsigned n = 1; n <= cap; ++n) {
    out.checked_through = n;
    if (is_stmod_zero(tower.tensored(n, x))) {
      out.order = n;
      return out;
    }
  }
  return out;
}

NilpotenceResult nilpotence_order(const RelCtx& ctx, const GModule& x, unsigned cap) {
  XiTower tower(ctx);
  return nilpotence_order(tower, x, cap);
}

NilpotenceResult relative_nilpotence_order(XiTower& tower, const GModule& x, unsigned cap,
                                           std::size_t max_source_dim) {
  if (cap == 0) throw Error("relative_nilpotence_order: cap must be at least 1");
  NilpotenceResult out;
  out.cap = cap;
  if ((out.witness_element = tower.restriction_witness(x, cap, true))) return out;
  const std::size_t limit = x.dim() == 0 ? max_source_dim : max_source_dim / x.dim();
  for (unsigned n = 1; n <= cap; ++n) {
    if (!tower.module_dim(n, limit)) return out;
    out.checked_through = n;
    if (is_contractible(tower.ctx(), tower.tensored(n, x)).contractible) {
      out.order = n;
      return out;
    }
  }
  return out;
}

ConeXiSq cone_xi_sq(XiTower& tower) {
  const GMap xi2 = tower.map(2);
  auto t = cone_st(xi2);
  const GModule& c = t.z;
  GModule src = tensor_product(xi2.source(), c);
  const GMap test =
      GMap::trusted(src, c, kron(xi2.matrix(), Matrix::identity(c.field(), c.dim())));
  if (!is_stmod_zero(test))
    throw VerificationError("cone_xi_sq: xi_B^2 (x) C does not factor through a projective");
  return {c, xi2};
}

ConeXiSq cone_xi_sq(const RelCtx& ctx) {
  XiTower tower(ctx);
  return cone_xi_sq(tower);
}

IdealUniverse thick_closure(const std::vector<GModule>& generators, std::size_t dim_cap,
                            const std::vector<GModule>& tensor_generators,
                            const DecomposeOptions& options) {
  IdealUniverse u;
  u.generators = generators;
  u.dim_cap = dim_cap;
  MemberSet set;
  std::vector<bool> projective;
  auto record = [&](const GModule& m) {
    if (set.insert(m)) projective.push_back(is_projective(m));
  };
  for (const auto& g : generators) {
    require_p_group(g);
    for (const auto& s : krull_schmidt(g, options).summands) record(s.module);
  }
  auto add_result = [&](const GModule& m) {
    if (m.dim() > 2 * dim_cap + 2 * m.group().order()) {
      ++u.discarded;
      return;
    }
    GModule s = strip_projectives(m);
    if (s.dim() == 0) return;
    if (s.dim() > dim_cap) {
      ++u.discarded;
      return;
    }
    for (const auto& part : krull_schmidt(s, options).summands) record(part.module);
  };

  std::size_t done = 0;
  while (done < set.members.size()) {
    const std::size_t end = set.members.size();
    // Pairs with at least one member new in this pass.
    for (std::size_t i = 0; i < end; ++i)
      for (std::size_t j = 0; j < end; ++j) {
        if ((i < done && j < done) || projective[i] || projective[j]) continue;
        const GModule x = set.members[i];
        const GModule y = set.members[j];
        try {
          const auto homs = hom_space(x, y);
          for (std::size_t k = 0; k < homs.dim(); ++k) {
            add_result(cone_st(homs.map(k)).z);
            add_result(fibre_st(homs.map(k)).w);
          }
        } catch (const DimensionError&) {
          ++u.discarded;
        }
      }
    for (std::size_t i = done; i < end; ++i) {
      if (projective[i]) continue;
      const GModule x = set.members[i];
      for (const auto& t : tensor_generators) add_result(tensor_product(x, t));
      add_result(sigma(x));
      add_result(omega(x));
    }
    done = end;
  }
  u.members = std::move(set.members);
  u.saturated = u.discarded == 0;
  return u;
}

bool in_thick(const IdealUniverse& u, const GModule& x, const DecomposeOptions& options) {
  if (!u.saturated)
    throw Error("in_thick: universe is not saturated (" + std::to_string(u.discarded) +
                " results exceeded dim_cap " + std::to_string(u.dim_cap) + ")");
  const GModule s = strip_projectives(x);
  if (s.dim() == 0) return true;
  MemberSet set;
  for (const auto& m : u.members) set.insert(m);
  for (const auto& part : krull_schmidt(s, options).summands)
    if (!set.contains(part.module, module_key(part.module))) return false;
  return true;
}

std::vector<Point> projective_points(unsigned p, std::size_t r) {
  std::vector<Point> out;
  if (r == 0) return out;
  Point v(r, 0);
  for (;;) {
    std::size_t first = 0;
    while (first < r && v[first] == 0) ++first;
    if (first < r && v[first] == 1) out.push_back(v);
    std::size_t i = r;
    while (i > 0 && ++v[i - 1] == p) v[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

SupportSet rank_variety_support(const GModule& m) {
  const auto& g = m.group();
  const unsigned p = m.field().p();
  if (!g.is_elementary_abelian(p))
    throw GroupError("rank_variety_support: group is not elementary abelian of characteristic p");
  const std::size_t r = g.num_generators();
  const std::size_t d = m.dim();
  const Matrix id = Matrix::identity(m.field(), d);
  SupportSet out;
  for (const auto& alpha : projective_points(p, r)) {
    Matrix u(m.field(), d, d);
    for (std::size_t i = 0; i < r; ++i)
      if (alpha[i]) u = u + (m.action(i) - id).scaled(static_cast<Scalar>(alpha[i]));
    if (p * rank(u) < (p - 1) * d) out.points.push_back(alpha);
  }
  return out;
}

bool BirationalReport::all_agree() const {
  for (const auto& r : rows)
    if (!r.agree || !r.locus_inclusion) return false;
  return true;
}

BirationalReport birational_report(const RelCtx& ctx, const std::vector<NamedModule>& corpus,
                                   unsigned nilp_cap, std::size_t dim_cap) {
  const auto& g = *ctx.group;
  BirationalReport rep;
  auto support_of = [&](const GModule& m) -> SupportSet {
    if (rep.shape == "elementary abelian") return rank_variety_support(m);
    SupportSet s;
    if (!is_projective(m)) s.points.push_back({1});
    return s;
  };
  if (g.is_elementary_abelian(ctx.field.p())) {
    rep.shape = "elementary abelian";
    rep.all_points = projective_points(ctx.field.p(), g.num_generators());
  } else if (is_cyclic(g)) {
    rep.shape = "cyclic";
    rep.all_points = {{1}};
  } else {
    throw GroupError("birational_report: group must be elementary abelian or cyclic");
  }
  rep.supp_b = support_of(ctx.b).points;
  for (const auto& pt : rep.all_points)
    if (std::find(rep.supp_b.begin(), rep.supp_b.end(), pt) == rep.supp_b.end())
      rep.u.push_back(pt);
  rep.degenerate = rep.shape == "cyclic" || rep.u.empty();

  XiTower tower(ctx);
  try {
    rep.c = cone_xi_sq(tower).c;
    rep.xi_sq_tensor_c_stmod_zero = true;
  } catch (const DimensionError& e) {
    rep.notes.push_back(std::string("xi^2 (x) C not checked: ") + e.what());
  }
  rep.xi_tensor_b_contractible = is_contractible(ctx, tower.tensored(1, ctx.b)).contractible;
  rep.b_tensor_xi_stmod_zero = is_stmod_zero(tensor_maps(GMap::identity(ctx.b), ctx.xib));

  std::vector<GModule> tensor_gens;
  for (const auto& nm : corpus) tensor_gens.push_back(nm.module);
  const GModule one = trivial_module(ctx.group, ctx.field);
  rep.faithful = is_contractible(ctx, GMap::identity(one)).contractible;
  if (rep.faithful) {
    rep.degenerate = true;
    rep.universe.generators = {ctx.b};
    rep.universe.dim_cap = dim_cap;
  } else {
    rep.universe = thick_closure({ctx.b}, dim_cap, tensor_gens, ctx.options);
  }

  for (const auto& nm : corpus) {
    BirationalRow row;
    row.name = nm.name;
    row.dim = nm.module.dim();
    row.nilpotence = nilpotence_order(tower, nm.module, nilp_cap);
    // With 1 in add(B (x) K) every X = 1 (x) X lies in the ideal.
    const bool decided = rep.faithful || rep.universe.saturated;
    row.in_thick = rep.faithful || (decided && in_thick(rep.universe, nm.module, ctx.options));
    row.support = support_of(nm.module);
    row.support_in_supp_b = subset(row.support->points, rep.supp_b);
    const bool nilpotent = row.nilpotence.order.has_value();
    row.agree = decided && row.nilpotence.decided() && nilpotent == row.in_thick &&
                nilpotent == row.support_in_supp_b;
    row.relative_nilpotence = relative_nilpotence_order(tower, nm.module, nilp_cap);
    bool ok = true;
    if (row.relative_nilpotence.order) {
      const unsigned n = *row.relative_nilpotence.order;
      if (nilpotent && n > *row.nilpotence.order) ok = false;
      if (n + 1 <= nilp_cap && !is_stmod_zero(tower.tensored(n + 1, nm.module))) ok = false;
    } else if (nilpotent && row.relative_nilpotence.checked_through >= *row.nilpotence.order) {
      ok = false;
    }
    row.locus_inclusion = ok;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::vector<GradedDim> graded_unit_dims(const RelCtx& ctx, unsigned n_max) {
  const GModule one = trivial_module(ctx.group, ctx.field);
  const GModule twist = strip_relative(ctx, sigma(one));
  const GModule twist_inv = dual_module(twist);
  std::vector<GradedDim> out;
  std::vector<std::size_t> neg;
  GModule w = one;
  for (unsigned n = 1; n <= n_max; ++n) {
    w = strip_relative(ctx, tensor_product(twist_inv, w));
    neg.push_back(rel_hom(ctx, one, w).dim());
  }
  for (unsigned n = n_max; n >= 1; --n) out.push_back({-static_cast<int>(n), neg[n - 1]});
  out.push_back({0, rel_hom(ctx, one, one).dim()});
  w = one;
  for (unsigned n = 1; n <= n_max; ++n) {
    w = strip_relative(ctx, tensor_product(twist, w));
    out.push_back({static_cast<int>(n), rel_hom(ctx, one, w).dim()});
  }
  return out;
}

}  // namespace relstab
