#pragma once

// The relative stable category Delta(K; B) = stmod(kG) / add(B (x) stmod(kG))
// for a module B (rigid, with dual B^).
//
// Conventions: coev : 1 -> B^ (x) B is sum_i e_i^ (x) e_i (index i * b + i)
// and ev : B (x) B^ -> 1 is e_i (x) e_j^ -> delta_ij. F_B is the fibre of
// sigma o coev : 1 -> B (x) B^ with sigma the symmetry, and xi_B : F_B -> 1.
// A map is contractible when it factors through B (x) M or a projective;
// by adjunction this is the case exactly when it factors through
// (ev_Y, p_Y) : (B (x) B^ (x) Y) (+) P(Y) -> Y.

#include <optional>
#include <string>
#include <vector>

#include "relstab/decomposition.hpp"
#include "relstab/stable.hpp"

namespace relstab {

struct RelCtx {
  GroupPtr group;
  FieldSpec field;
  GModule b;
  GModule bdual;
  GMap coev;  // 1 -> B^ (x) B
  GMap ev;    // B (x) B^ -> 1
  GModule fb;
  GMap xib;   // F_B -> 1
  DecomposeOptions options;
};

// Builds the context and verifies the triangle identities and that
// B (x) xi_B factors through a projective (VerificationError otherwise).
RelCtx make_ctx(const GModule& b, const DecomposeOptions& options = {});

// ev_Y : B (x) B^ (x) Y -> Y.
GMap ev_precover(const RelCtx& ctx, const GModule& y);
// coev (x) X : X -> B^ (x) B (x) X.
GMap coev_preenvelope(const RelCtx& ctx, const GModule& x);

struct Contractibility {
  bool contractible = false;
  // When contractible: f = ev_Y o through_ev + through_hull o i_X.
  std::optional<GMap> through_ev;
  std::optional<GMap> through_hull;
};
Contractibility is_contractible(const RelCtx& ctx, const GMap& f);

// Hom(X, Y) modulo contractible maps.
using RelHom = HomQuotient;
RelHom rel_hom(const RelCtx& ctx, const GModule& x, const GModule& y);

// X = module (+) contractible part, with split G-maps.
struct RelStripped {
  GModule module;
  Matrix inclusion;   // module -> X
  Matrix projection;  // X -> module
};
RelStripped strip_relative_split(const RelCtx& ctx, const GModule& x);
GModule strip_relative(const RelCtx& ctx, const GModule& x);

// Sigma_B X = cone of coev (x) X, Sigma_B^-1 X = fibre of (ev_X, p_X), both
// relatively stripped.
GModule sigma_b(const RelCtx& ctx, const GModule& x);
GModule sigma_b_inv(const RelCtx& ctx, const GModule& x);

struct FbXi {
  GModule fb;
  GMap xib;
};
FbXi f_b_and_xi(const RelCtx& ctx);

struct RelTriangle {
  GModule x, y, z;
  GMap f, g, h;  // h : Z -> representative of Sigma_B X
  std::string provenance;
};

// Triangle on f in Delta built from the stmod cone of f o (xi_B (x) X).
// X and Y are replaced by their relatively stripped forms; h lands in
// strip_relative(Sigma(F_B (x) X)).
RelTriangle rel_cone(const RelCtx& ctx, const GMap& f);

// Image in Delta of the short exact sequence 0 -> A -f-> B -g-> C -> 0,
// which must be B-split (B (x) connecting map factors through a projective).
// h lands in sigma_b(A).
RelTriangle image_triangle(const RelCtx& ctx, const GMap& f, const GMap& g);
// Image of the stmod triangle X -> Y -> cone(f), via the short exact
// sequence X -> Y (+) I(X) -> cone.
RelTriangle image_triangle(const RelCtx& ctx, const GMap& f);

// Solves for g with g o f - id and f o g - id contractible.
std::optional<GMap> rel_inverse(const RelCtx& ctx, const GMap& f);
bool is_rel_iso(const RelCtx& ctx, const GMap& f);

// Isomorphism in Delta by comparing relatively stripped forms.
bool stable_b_iso(const RelCtx& ctx, const GModule& x, const GModule& y);

struct RelIsoSearch {
  std::optional<GMap> iso;
  bool exhaustive = false;  // false: seeded random search, a negative is not a proof
};
// Isomorphism in Delta by searching Rel(X, Y) for a map with a relative
// inverse: exhaustive when p^dim <= 2^16.
RelIsoSearch find_rel_iso(const RelCtx& ctx, const GModule& x, const GModule& y);

struct LesPosition {
  std::string name;
  std::size_t dim_left = 0, dim_middle = 0, dim_right = 0;
  bool exact = false;
};
struct LesReport {
  std::vector<LesPosition> positions;
  bool all_exact() const;
};
// Exactness of Rel(W, -) at Y and Z, and of Rel(-, W) at Y, on the triangle.
LesReport check_les(const RelCtx& ctx, const RelTriangle& t, const GModule& w);

}  // namespace relstab
