#include <doctest.h>

#include "relstab/relative.hpp"
#include "support.hpp"

using namespace relstab;
using namespace testsupport;

namespace {

using Sizes = std::vector<std::size_t>;

struct C4Sandbox {
  GroupPtr g = cyclic_group(4);
  GModule j1 = jordan_module(g, F2, 1), j2 = jordan_module(g, F2, 2), j3 = jordan_module(g, F2, 3),
          j4 = jordan_module(g, F2, 4);
  RelCtx ctx = make_ctx(j2);

  std::vector<GModule> corpus() const {
    return {j1, j2, j3, j4, direct_sum_module(j1, j2), direct_sum_module(j1, j3),
            direct_sum_module(j3, j4)};
  }
};

struct V4Sandbox {
  GroupPtr g = klein_four();
  GModule k = trivial_module(g, F2);
  GModule b = perm_on_cosets(make_subgroup(g, {g->generator_element(0)}), F2);
  GModule b2 = perm_on_cosets(make_subgroup(g, {g->generator_element(1)}), F2);
  RelCtx ctx = make_ctx(b);

  std::vector<GModule> corpus() const { return {k, b, omega(k), b2, direct_sum_module(k, b)}; }
};

// Maps X -> Y through B (x) J_n for all n and through kG, by brute force.
Subspace brute_contractible_span(const RelCtx& ctx, const GModule& x, const GModule& y,
                                 std::size_t max_jordan) {
  std::vector<GModule> through = {regular_module(x.group_ptr(), F2)};
  for (std::size_t n = 1; n <= max_jordan; ++n)
    through.push_back(tensor_product(ctx.b, jordan_module(x.group_ptr(), F2, n)));
  Subspace s(F2, x.dim() * y.dim());
  for (const auto& m : through) {
    auto in = hom_space(x, m);
    auto out = hom_space(m, y);
    for (const auto& a : in.basis)
      for (const auto& b : out.basis) s.insert((b * a).data());
  }
  return s;
}

}  // namespace

TEST_CASE("make_ctx examples") {
  C4Sandbox c4;
  CHECK(is_stmod_zero(tensor_maps(GMap::identity(c4.ctx.b), c4.ctx.xib)));
  CHECK(block_sizes(c4.ctx.fb) == Sizes{3, 2});

  auto c2 = cyclic_group(2);
  auto reg = make_ctx(regular_module(c2, F2));
  CHECK(block_sizes(reg.fb) == Sizes{1});

  auto triv = make_ctx(trivial_module(c2, F2));
  CHECK(triv.fb.dim() == 0);
  CHECK_THROWS_AS(make_ctx(zero_module(c2, F2)), ModuleError);
  CHECK_THROWS_AS(make_ctx(trivial_module(cyclic_group(3), F2)), NotPGroupError);
}

TEST_CASE("contractibility examples") {
  C4Sandbox c4;
  CHECK(is_contractible(c4.ctx, GMap::identity(c4.j2)).contractible);
  CHECK(is_contractible(c4.ctx, GMap::identity(c4.j4)).contractible);
  CHECK_FALSE(is_contractible(c4.ctx, GMap::identity(c4.j1)).contractible);
  CHECK_FALSE(is_contractible(c4.ctx, GMap::identity(c4.j3)).contractible);

  auto r = is_contractible(c4.ctx, GMap::identity(c4.j2));
  REQUIRE(r.through_ev);
  REQUIRE(r.through_hull);
  auto evy = ev_precover(c4.ctx, c4.j2);
  auto hull = injective_hull(c4.j2);
  CHECK(evy.matrix() * r.through_ev->matrix() + r.through_hull->matrix() * hull.map.matrix() ==
        Matrix::identity(F2, 2));
}

TEST_CASE("contractibility agrees with brute-force factorisation over C_4") {
  C4Sandbox c4;
  auto corpus = c4.corpus();
  for (const auto& x : corpus)
    for (const auto& y : corpus) {
      auto span = brute_contractible_span(c4.ctx, x, y, 4);
      auto rel = rel_hom(c4.ctx, x, y);
      CHECK(rel.dim() + span.dim() == rel.homs.dim());
      for (const auto& h : rel.homs.basis)
        CHECK(is_contractible(c4.ctx, GMap(x, y, h)).contractible == span.contains(h.data()));
    }
}

TEST_CASE("rel_hom examples") {
  C4Sandbox c4;
  CHECK(rel_hom(c4.ctx, c4.j1, c4.j1).dim() == 1);
  CHECK(rel_hom(c4.ctx, c4.j1, c4.j3).dim() == 0);
  CHECK(rel_hom(c4.ctx, zero_module(c4.g, F2), c4.j3).dim() == 0);
  for (const auto& x : c4.corpus())
    CHECK(rel_hom(c4.ctx, x, tensor_product(c4.j2, c4.j3)).dim() == 0);
}

TEST_CASE("strip_relative examples") {
  C4Sandbox c4;
  auto s = strip_relative_split(c4.ctx, sum({c4.j1, c4.j2, c4.j4}));
  CHECK(block_sizes(s.module) == Sizes{1});
  CHECK((s.projection * s.inclusion).is_identity());
  CHECK(strip_relative(c4.ctx, zero_module(c4.g, F2)).dim() == 0);
  CHECK(is_isomorphic(strip_relative(c4.ctx, direct_sum_module(c4.j2, c4.j3)),
                      strip_relative(c4.ctx, c4.j3))
            .isomorphic);
}

TEST_CASE("sigma_B examples") {
  C4Sandbox c4;
  CHECK(block_sizes(sigma_b(c4.ctx, c4.j1)) == Sizes{1});
  CHECK(block_sizes(sigma_b(c4.ctx, c4.j3)) == Sizes{3});
  CHECK(sigma_b(c4.ctx, c4.j2).dim() == 0);

  auto reg = make_ctx(regular_module(c4.g, F2));
  for (const auto& x : c4.corpus())
    CHECK(is_isomorphic(sigma_b(reg, x), sigma(x)).isomorphic);
}

TEST_CASE("sigma_B and its inverse") {
  C4Sandbox c4;
  V4Sandbox v4;
  auto run = [](const RelCtx& ctx, const std::vector<GModule>& corpus) {
    for (const auto& x : corpus) {
      CHECK(stable_b_iso(ctx, sigma_b_inv(ctx, sigma_b(ctx, x)), x));
      CHECK(stable_b_iso(ctx, sigma_b(ctx, sigma_b_inv(ctx, x)), x));
    }
  };
  run(c4.ctx, c4.corpus());
  run(v4.ctx, v4.corpus());
}

TEST_CASE("stable-B isomorphism: both routes agree") {
  C4Sandbox c4;
  auto corpus = c4.corpus();
  for (const auto& x : corpus)
    for (const auto& y : corpus) {
      auto search = find_rel_iso(c4.ctx, x, y);
      CHECK(search.exhaustive);
      CHECK(search.iso.has_value() == stable_b_iso(c4.ctx, x, y));
      if (search.iso) CHECK(is_rel_iso(c4.ctx, *search.iso));
    }
  CHECK_FALSE(stable_b_iso(c4.ctx, c4.j1, c4.j3));
  CHECK(stable_b_iso(c4.ctx, c4.j3, sum({c4.j3, c4.j2, tensor_product(c4.j2, c4.j3)})));
}

TEST_CASE("rel_cone triangles") {
  C4Sandbox c4;
  V4Sandbox v4;
  std::mt19937_64 rng(17);
  auto run = [&](const RelCtx& ctx, const std::vector<GModule>& corpus) {
    for (const auto& x : corpus)
      for (const auto& y : corpus) {
        auto homs = hom_space(x, y);
        if (homs.dim() == 0) continue;
        std::vector<Scalar> c(homs.dim());
        for (auto& v : c) v = static_cast<Scalar>(rng() % 2);
        auto t = rel_cone(ctx, GMap(x, y, homs.combination(c)));
        CHECK(is_contractible(ctx, compose(t.g, t.f)).contractible);
        CHECK(is_contractible(ctx, compose(t.h, t.g)).contractible);
        for (const auto& w : corpus) CHECK(check_les(ctx, t, w).all_exact());
      }
  };
  run(c4.ctx, {c4.j1, c4.j3, direct_sum_module(c4.j1, c4.j3)});
  run(v4.ctx, {v4.k, omega(v4.k), v4.b2});

  auto id = rel_cone(c4.ctx, GMap::identity(c4.j3));
  CHECK(id.z.dim() == 0);
  auto zero = rel_cone(c4.ctx, GMap::zero(c4.j1, c4.j3));
  CHECK(stable_b_iso(c4.ctx, zero.z, direct_sum_module(c4.j3, sigma_b(c4.ctx, c4.j1))));
}

TEST_CASE("image triangles") {
  C4Sandbox c4;
  // The triangle on the coevaluation is B-split.
  auto t = image_triangle(c4.ctx, c4.ctx.coev);
  CHECK(t.y.dim() == 0);
  CHECK(is_contractible(c4.ctx, compose(t.g, t.f)).contractible);
  for (const auto& w : c4.corpus()) CHECK(check_les(c4.ctx, t, w).all_exact());

  // Split sequence J_1 -> J_1 (+) J_3 -> J_3: third map zero.
  auto m = direct_sum_module(c4.j1, c4.j3);
  Matrix i(F2, 4, 1), p(F2, 3, 4);
  i(0, 0) = 1;
  p(0, 1) = p(1, 2) = p(2, 3) = 1;
  auto s = image_triangle(c4.ctx, GMap(c4.j1, m, i), GMap(m, c4.j3, p));
  CHECK(s.h.matrix().is_zero());

  // 0 -> J_1 -> J_2 -> J_1 -> 0 is accepted exactly when it is B-split.
  Matrix i12(F2, 2, 1), p21(F2, 1, 2);
  i12(0, 0) = 1;
  p21(0, 1) = 1;
  const GMap f(c4.j1, c4.j2, i12), g(c4.j2, c4.j1, p21);
  const GMap delta = connecting_map(f, g);
  for (const auto& b : {c4.j1, c4.j2, c4.j3, c4.j4}) {
    auto ctx = make_ctx(b);
    if (is_stmod_zero(tensor_maps(GMap::identity(b), delta))) {
      auto u = image_triangle(ctx, f, g);
      for (const auto& w : c4.corpus()) CHECK(check_les(ctx, u, w).all_exact());
    } else {
      CHECK_THROWS_AS(image_triangle(ctx, f, g), VerificationError);
    }
  }
}

TEST_CASE("F_B is invertible and twists sigma") {
  C4Sandbox c4;
  V4Sandbox v4;
  auto c2 = cyclic_group(2);
  auto reg = make_ctx(regular_module(c2, F2));
  auto check = [](const RelCtx& ctx, const std::vector<GModule>& corpus) {
    auto one = trivial_module(ctx.group, F2);
    CHECK(stable_b_iso(ctx, tensor_product(ctx.fb, dual_module(ctx.fb)), one));
    for (const auto& x : corpus) {
      CHECK(stable_b_iso(ctx, sigma_b(ctx, x), tensor_product(ctx.fb, sigma(x))));
      for (const auto& y : corpus)
        if (x.dim() * y.dim() <= 8)
          CHECK(stable_b_iso(ctx, sigma_b(ctx, tensor_product(x, y)),
                             tensor_product(sigma_b(ctx, x), y)));
    }
  };
  check(c4.ctx, c4.corpus());
  check(v4.ctx, v4.corpus());
  check(reg, {jordan_module(c2, F2, 1), jordan_module(c2, F2, 2)});
}

TEST_CASE("faithfulness dichotomy") {
  C4Sandbox c4;
  auto with_unit = make_ctx(direct_sum_module(c4.j1, c4.j2));
  auto reg = make_ctx(c4.j4);
  for (const auto& x : c4.corpus()) {
    CHECK(rel_hom(with_unit, x, x).dim() == 0);
    for (const auto& y : c4.corpus()) CHECK(rel_hom(reg, x, y).dim() == stable_hom(x, y).dim());
  }
}

TEST_CASE("strip_relative commutes with restriction") {
  C4Sandbox c4;
  auto h = make_subgroup(c4.g, {c4.g->mul(c4.g->generator_element(0), c4.g->generator_element(0))});
  auto ctx_h = make_ctx(restrict_module(c4.j2, h));
  for (const auto& x : c4.corpus()) {
    auto direct = strip_relative(ctx_h, restrict_module(x, h));
    auto other = strip_relative(ctx_h, restrict_module(strip_relative(c4.ctx, x), h));
    CHECK(is_isomorphic(direct, other).isomorphic);
  }
}
