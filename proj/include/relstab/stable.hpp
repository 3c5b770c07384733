#pragma once

// The Frobenius structure of mod(kG) for a p-group G in characteristic p and
// the triangulated stable category stmod(kG).
//
// Projective = injective = free here. Covers are kG^r -> M on module
// generators complementing the radical; hulls are the duals of covers of M^.
// Objects returned at the stable level have their projective summands
// removed; maps returned alongside refer to those stripped representatives.

#include <optional>
#include <vector>

#include "relstab/module.hpp"

namespace relstab {

// Throws NotPGroupError unless |G| is a power of the characteristic.
void require_p_group(const GModule& m);

// Basis (columns) of rad M = sum of (g - 1) M.
Matrix radical(const GModule& m);

struct ProjectiveCover {
  GModule projective;
  GMap map;  // projective -> M, surjective, kernel inside the radical
};
ProjectiveCover projective_cover(const GModule& m);

struct InjectiveHull {
  GModule injective;
  GMap map;  // M -> injective, injective
};
InjectiveHull injective_hull(const GModule& m);

bool is_projective(const GModule& m);

// M = stripped (+) free part. projection * inclusion = id and both are
// G-linear; the free part is the image of the norm-detected free summands.
struct StrippedModule {
  GModule module;
  Matrix inclusion;   // stripped -> M
  Matrix projection;  // M -> stripped
  std::size_t free_rank = 0;
};
StrippedModule strip_projectives_split(const GModule& m);
GModule strip_projectives(const GModule& m);

// Omega(M) = ker of the projective cover, Sigma(M) = coker of the injective
// hull, both stripped.
GModule omega(const GModule& m);
GModule sigma(const GModule& m);

struct ProjectiveFactorization {
  bool factors = false;
  // When factors: g : I(X) -> Y with g o i_X = f for the injective hull of X.
  std::optional<GMap> through_hull;
};
ProjectiveFactorization factors_through_projective(const GMap& f);
inline bool is_stmod_zero(const GMap& f) { return factors_through_projective(f).factors; }

// Maps X -> Y that factor through a projective, as a spanning set of
// matrices (the images of the trace construction through the hull of X).
std::vector<Matrix> projective_hom_spanning_set(const GModule& x, const GModule& y);

// Hom(M, N) modulo a subspace of "null" maps, with coset representatives
// chosen among the hom basis elements.
struct HomQuotient {
  HomBasis homs;
  HomCoordinates coordinates;
  std::size_t null_dim = 0;
  Matrix to_quotient;  // dim() x homs.dim(), applied to hom coordinates
  std::vector<Matrix> representatives;

  std::size_t dim() const noexcept { return representatives.size(); }
  std::vector<Scalar> reduce(const Matrix& t) const;
  bool is_null(const Matrix& t) const;
};

// Matrix of T -> post * T * pre from src to dst in quotient coordinates
// (columns: images of the representatives of src). Either factor may be null.
Matrix induced_map(const HomQuotient& src, const HomQuotient& dst, const Matrix* pre,
                   const Matrix* post);

HomQuotient make_hom_quotient(HomBasis homs, const std::vector<std::vector<Scalar>>& null_coords);

// Coordinates (in the given hom basis) of a spanning set of the maps that
// factor through a projective.
std::vector<std::vector<Scalar>> projective_hom_coords(const HomBasis& homs,
                                                       const HomCoordinates& coords);

using StableHom = HomQuotient;
StableHom stable_hom(const GModule& m, const GModule& n);

// X -f-> Y -g-> Z -h-> Sigma X with Z and Sigma X stripped.
struct StmodTriangle {
  GModule x, y, z;
  GMap f, g, h;
};

StmodTriangle cone_st(const GMap& f);

// Exactness of StHom(W, X) -> StHom(W, Y) -> StHom(W, Z) at the middle.
struct StableLes {
  std::size_t dim_x = 0, dim_y = 0, dim_z = 0;
  bool exact = false;
};
StableLes stable_les(const StmodTriangle& t, const GModule& w);

// W -u-> X -f-> Y with W stripped, plus the map Omega Y -> W completing the
// rotated triangle Omega Y -> W -> X -> Y.
struct Fibre {
  GModule w;
  GMap u;
  GMap from_omega;
};
Fibre fibre_st(const GMap& f);

// Triangle A -f-> B -g-> C -delta-> Sigma A of a short exact sequence
// (f injective, g surjective, im f = ker g).
StmodTriangle ses_triangle(const GMap& f, const GMap& g);

// The connecting map C -> Sigma A (stripped) for a short exact sequence.
GMap connecting_map(const GMap& f, const GMap& g);

}  // namespace relstab
