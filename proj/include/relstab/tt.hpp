#pragma once

// Desk-scale tensor-triangular geometry around xi_B: nilpotence of xi_B,
// C = cone(xi_B^2), bounded thick tensor-ideal closures, rank-variety
// supports for elementary abelian groups and the birationality report.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relstab/relative.hpp"

namespace relstab {

struct NilpotenceResult {
  std::optional<unsigned> order;  // absent: no vanishing up to checked_through
  unsigned cap = 0;
  unsigned checked_through = 0;
  // Element of order p whose cyclic subgroup E certifies non-vanishing for
  // every n <= cap: res_E(xi)^cap (x) res_E X is nonzero over E.
  std::optional<std::size_t> witness_element;
  bool decided() const { return order.has_value() || checked_through == cap || witness_element; }
};

// xi_B^n : F_n -> 1 with F_n = F_B (x) F_{n-1} stripped of projectives and
// xi_n = xi_B o (F_B (x) xi_{n-1}) restricted to the stripped part.
class XiTower {
 public:
  explicit XiTower(RelCtx ctx);

  const RelCtx& ctx() const { return ctx_; }
  const GModule& module(unsigned n);
  const GMap& map(unsigned n);
  // xi^n (x) X : F_n (x) X -> X.
  GMap tensored(unsigned n, const GModule& x);
  // Dimension of F_n, computing levels only while they stay within limit.
  std::optional<std::size_t> module_dim(unsigned n, std::size_t limit);

  // A cyclic subgroup of order p over which xi^n (x) X restricts to a map
  // that is nonzero in stmod (relative = false) or non-contractible
  // (relative = true). Subgroup towers are built lazily and abandoned once
  // a level exceeds witness_dim_limit.
  std::optional<std::size_t> restriction_witness(const GModule& x, unsigned n, bool relative);
  std::size_t witness_dim_limit = 512;

 private:
  struct Restricted {
    std::size_t element;
    Subgroup sub;
    std::shared_ptr<XiTower> tower;  // null when the restricted B gives no context
  };
  void extend(unsigned n);
  void init_restrictions();
  RelCtx ctx_;
  std::vector<GModule> modules_;
  std::vector<GMap> maps_;
  std::optional<std::vector<Restricted>> restricted_;
};

// Least n <= cap with xi_B^n (x) X factoring through a projective. A
// restriction witness is tried first; otherwise every level is computed.
NilpotenceResult nilpotence_order(const RelCtx& ctx, const GModule& x, unsigned cap);
NilpotenceResult nilpotence_order(XiTower& tower, const GModule& x, unsigned cap);
// Least n <= cap with xi_B^n (x) X contractible. Levels whose source
// F_n (x) X exceeds max_source_dim are not computed (checked_through < cap).
NilpotenceResult relative_nilpotence_order(XiTower& tower, const GModule& x, unsigned cap,
                                           std::size_t max_source_dim = 256);

struct ConeXiSq {
  GModule c;
  GMap xi_sq;  // F_2 -> 1
};
// Throws VerificationError unless xi_B^2 (x) C factors through a projective.
ConeXiSq cone_xi_sq(const RelCtx& ctx);
ConeXiSq cone_xi_sq(XiTower& tower);

struct IdealUniverse {
  std::vector<GModule> generators;
  std::vector<GModule> members;  // indecomposable, pairwise non-isomorphic
  std::size_t dim_cap = 0;
  bool saturated = false;        // fixpoint reached with nothing discarded
  // Results above the cap, including intermediates too large to strip.
  std::size_t discarded = 0;
};

// Closure of the generators' summands under cones and fibres of hom-basis
// maps between members, tensoring with the tensor generators, Sigma and
// Omega; results whose stripped dimension exceeds dim_cap are discarded.
IdealUniverse thick_closure(const std::vector<GModule>& generators, std::size_t dim_cap,
                            const std::vector<GModule>& tensor_generators,
                            const DecomposeOptions& options = {});

// Every non-projective indecomposable summand of X is a member. Throws Error
// for an unsaturated universe.
bool in_thick(const IdealUniverse& u, const GModule& x, const DecomposeOptions& options = {});

using Point = std::vector<unsigned>;

struct SupportSet {
  std::vector<Point> points;  // normalised: first nonzero coordinate 1
  // Every GF(p)-rational point was tested. Points over the algebraic
  // closure are not examined.
  bool complete = true;
};

// Points of P^{r-1}(GF(p)) in first-nonzero-is-one form, lexicographic.
std::vector<Point> projective_points(unsigned p, std::size_t r);

// Rank variety at rational points for G = (C_p)^r with its r generators.
SupportSet rank_variety_support(const GModule& m);

struct NamedModule {
  std::string name;
  GModule module;
};

struct BirationalRow {
  std::string name;
  std::size_t dim = 0;
  NilpotenceResult nilpotence;
  bool in_thick = false;
  std::optional<SupportSet> support;
  bool support_in_supp_b = false;
  bool agree = false;
  // Least n with xi^n (x) X contractible, and whether xi^(n+1) (x) X is then
  // stmod-zero (checked when n + 1 <= cap) and consistent with nilpotence.
  NilpotenceResult relative_nilpotence;
  bool locus_inclusion = false;
};

struct BirationalReport {
  std::string shape;  // "elementary abelian" or "cyclic"
  bool degenerate = false;
  // id_1 is contractible, so Delta(K; B) = 0 and the closure is not run.
  bool faithful = false;
  std::vector<Point> all_points;
  std::vector<Point> supp_b;
  std::vector<Point> u;
  std::optional<GModule> c;
  bool xi_tensor_b_contractible = false;
  bool b_tensor_xi_stmod_zero = false;
  bool xi_sq_tensor_c_stmod_zero = false;
  IdealUniverse universe;
  std::vector<BirationalRow> rows;
  std::vector<std::string> notes;
  bool all_agree() const;
};

BirationalReport birational_report(const RelCtx& ctx, const std::vector<NamedModule>& corpus,
                                   unsigned nilp_cap = 8, std::size_t dim_cap = 64);

struct GradedDim {
  int n = 0;
  std::size_t dim = 0;
};
// dim Rel(1, v^n) for v = strip_relative(Sigma 1), negative powers via the dual.
std::vector<GradedDim> graded_unit_dims(const RelCtx& ctx, unsigned n_max);

}  // namespace relstab
