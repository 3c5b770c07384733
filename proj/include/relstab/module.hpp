#pragma once

// kG-modules given by one matrix per group generator, maps between them, and
// the additive and monoidal operations on them.
//
// Index layout for tensor products follows kron: basis vector e_i (x) f_j of
// M (x) N has index i * dim N + j.

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "relstab/group.hpp"
#include "relstab/linalg.hpp"

namespace relstab {

class GModule {
 public:
  // Validating constructor: every generator matrix must be invertible and
  // A(s) A(e) = A(s * e) must hold for every generator s and element e.
  GModule(GroupPtr group, FieldSpec field, std::size_t dim, std::vector<Matrix> actions);

  // Skips validation. For modules produced by operations that preserve it.
  static GModule trusted(GroupPtr group, FieldSpec field, std::size_t dim,
                         std::vector<Matrix> actions, std::vector<Matrix> element_actions = {});

  const GroupPtr& group_ptr() const noexcept { return d_->group; }
  const FiniteGroup& group() const noexcept { return *d_->group; }
  FieldSpec field() const noexcept { return d_->field; }
  std::size_t dim() const noexcept { return d_->dim; }

  const Matrix& action(std::size_t gen) const { return d_->actions.at(gen); }
  const std::vector<Matrix>& actions() const noexcept { return d_->actions; }
  // Matrix of group element e (indexed as in FiniteGroup).
  const Matrix& element_action(std::size_t e) const;

  // Same group (structurally) and same field.
  bool compatible(const GModule& other) const;
  // Identical group, field and action matrices.
  friend bool operator==(const GModule& a, const GModule& b);

 private:
  struct Data {
    Data(GroupPtr g, FieldSpec f, std::size_t n, std::vector<Matrix> a)
        : group(std::move(g)), field(f), dim(n), actions(std::move(a)) {}
    GroupPtr group;
    FieldSpec field;
    std::size_t dim;
    std::vector<Matrix> actions;
    mutable std::once_flag elements_once;
    mutable std::vector<Matrix> elements;
  };
  explicit GModule(std::shared_ptr<Data> d) : d_(std::move(d)) {}
  static std::shared_ptr<Data> make_data(GroupPtr group, FieldSpec field, std::size_t dim,
                                         std::vector<Matrix> actions);

  std::shared_ptr<const Data> d_;
};

// Same as the validating constructor; dim is read off the matrices.
GModule build_module(GroupPtr group, FieldSpec field, std::vector<Matrix> actions);

// Throws ModuleError unless both modules live over the same group and field.
void require_compatible(const GModule& a, const GModule& b, const char* what);

// Hash of the field and action matrices (group excluded).
std::uint64_t module_hash(const GModule& m);

class GMap {
 public:
  // Validating constructor: target(s) * matrix == matrix * source(s) for all
  // generators s.
  GMap(GModule source, GModule target, Matrix matrix);
  static GMap trusted(GModule source, GModule target, Matrix matrix);

  static GMap identity(const GModule& m);
  static GMap zero(const GModule& source, const GModule& target);

  const GModule& source() const noexcept { return source_; }
  const GModule& target() const noexcept { return target_; }
  const Matrix& matrix() const noexcept { return matrix_; }

 private:
  struct Trusted {};
  GMap(Trusted, GModule source, GModule target, Matrix matrix);

  GModule source_;
  GModule target_;
  Matrix matrix_;
};

bool is_intertwiner(const GModule& source, const GModule& target, const Matrix& m);

// g o f.
GMap compose(const GMap& g, const GMap& f);
GMap tensor_maps(const GMap& f, const GMap& g);
GMap direct_sum_maps(const GMap& f, const GMap& g);
GMap add_maps(const GMap& f, const GMap& g);

struct HomBasis {
  GModule source;
  GModule target;
  std::vector<Matrix> basis;

  std::size_t dim() const noexcept { return basis.size(); }
  GMap map(std::size_t i) const { return GMap::trusted(source, target, basis.at(i)); }
  // sum_i coeffs[i] * basis[i].
  Matrix combination(std::span<const Scalar> coeffs) const;
};

HomBasis hom_space(const GModule& source, const GModule& target);

// Coordinates of intertwiners with respect to a HomBasis. An intertwiner is
// determined by its entries at dim() fixed positions (row-major indices into
// the matrix), which makes coordinate extraction cheap.
class HomCoordinates {
 public:
  explicit HomCoordinates(const HomBasis& hb);

  std::size_t dim() const noexcept { return positions_.size(); }
  const std::vector<std::size_t>& positions() const noexcept { return positions_; }
  std::vector<Scalar> coords(const Matrix& t) const;
  // Coordinates from the entries of an intertwiner at positions().
  std::vector<Scalar> coords_from_entries(std::span<const Scalar> entries) const;

 private:
  std::vector<std::size_t> positions_;
  Matrix rinv_;
};

// Coefficients a with sum_i a[i] * vectors[i] = target, or nullopt.
std::optional<std::vector<Scalar>> solve_in_span(FieldSpec field,
                                                 const std::vector<std::vector<Scalar>>& vectors,
                                                 std::span<const Scalar> target);

// Standard modules.
GModule zero_module(const GroupPtr& group, FieldSpec field);
GModule trivial_module(const GroupPtr& group, FieldSpec field);
// g . e_h = e_{gh}.
GModule regular_module(const GroupPtr& group, FieldSpec field);
// Permutation module on the left cosets t_j H, ordered as coset_transversal.
GModule perm_on_cosets(const Subgroup& h, FieldSpec field);

GModule tensor_product(const GModule& m, const GModule& n);
GModule dual_module(const GModule& m);
GModule direct_sum_module(const GModule& m, const GModule& n);
GModule direct_sum_module(const GroupPtr& group, FieldSpec field,
                          const std::vector<GModule>& parts);
// Direct sum of `count` copies of m.
GModule power_module(const GModule& m, std::size_t count);

GModule restrict_module(const GModule& m, const Subgroup& h);
// m is a module over h.group; the result lives over h.parent.
GModule induce_module(const GModule& m, const Subgroup& h);

// Permutation matrix M (x) N -> N (x) M, e_i (x) f_j -> f_j (x) e_i.
Matrix swap_matrix(FieldSpec field, std::size_t dim_m, std::size_t dim_n);
GMap symmetry_map(const GModule& m, const GModule& n);

// sum_h coeffs[h] * element_action(h).
Matrix group_algebra_action(const GModule& m, std::span<const Scalar> coeffs);
// Sum of all element actions.
Matrix norm_action(const GModule& m);

// Submodule spanned by the columns of `basis` (which must be independent and
// G-invariant) together with its inclusion.
struct SubmoduleResult {
  GModule module;
  Matrix inclusion;
};
SubmoduleResult submodule(const GModule& m, const Matrix& basis);

// Quotient by the submodule spanned by the columns of `sub`. The complement
// columns are standard basis vectors, so `section` is a linear (not
// necessarily G-linear) right inverse of `projection`.
struct QuotientResult {
  GModule module;
  Matrix projection;
  Matrix section;
};
QuotientResult quotient_module(const GModule& m, const Matrix& sub);

SubmoduleResult kernel_module(const GMap& f);
QuotientResult cokernel_module(const GMap& f);

// Column basis of the subspace spanned by {(A(s) - I) v}.
Matrix radical_basis(const GModule& m);

// Module generators: for p-groups in characteristic p, the standard basis
// vectors complementing the radical; otherwise a greedy spinning choice.
std::vector<std::size_t> generator_coordinates(const GModule& m);

}  // namespace relstab
