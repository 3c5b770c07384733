#pragma once

// Finite permutation groups with full element enumeration.
//
// Elements are indexed in breadth-first order from the identity (index 0),
// exploring generators in input order. Each non-identity element e records a
// parent and a generator s with e = s * parent, where (a * b)(x) = a(b(x)).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relstab/error.hpp"

namespace relstab {

using Perm = std::vector<std::uint32_t>;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline constexpr std::size_t kMaxGroupOrder = 512;

class FiniteGroup {
 public:
  std::size_t degree() const noexcept { return degree_; }
  std::size_t order() const noexcept { return elements_.size(); }
  std::size_t num_generators() const noexcept { return generators_.size(); }

  const std::vector<Perm>& generators() const noexcept { return generators_; }
  // Element index of generator i.
  std::size_t generator_element(std::size_t i) const { return generator_elements_.at(i); }

  const Perm& element(std::size_t e) const { return elements_.at(e); }
  std::optional<std::size_t> index_of(const Perm& perm) const;

  // Word in the generators evaluating to element e, applied right to left:
  // word {s1, s2} means s1 * s2.
  std::vector<std::size_t> word(std::size_t e) const;
  // For e != 0: e = generator(last_generator(e)) * element(parent(e)).
  std::size_t parent(std::size_t e) const { return parent_.at(e); }
  std::size_t last_generator(std::size_t e) const { return last_gen_.at(e); }

  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a * order() + b]; }
  std::size_t inverse(std::size_t a) const { return inverse_.at(a); }
  std::size_t element_order(std::size_t a) const;

  bool is_abelian() const;
  // |G| is a power of p (the trivial group counts).
  bool is_p_group(unsigned p) const;
  // G is (C_p)^r and its generators form a minimal generating set.
  bool is_elementary_abelian(unsigned p) const;
  // Smallest prime dividing the order, or 0 for the trivial group.
  unsigned order_prime() const;

  // Stable identifier derived from degree and generator images.
  std::uint64_t hash() const noexcept { return hash_; }
  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.degree_ == b.degree_ && a.generators_ == b.generators_;
  }

  friend GroupPtr build_group(std::vector<Perm> generators, std::optional<std::size_t> degree);

 private:
  FiniteGroup() = default;

  std::size_t degree_ = 0;
  std::vector<Perm> generators_;
  std::vector<std::size_t> generator_elements_;
  std::vector<Perm> elements_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> last_gen_;
  std::vector<std::size_t> inverse_;
  std::vector<std::uint32_t> table_;
  std::uint64_t hash_ = 0;
};

// Closes the generators under composition. The degree is inferred from the
// generators when omitted (and is 0 for an empty generator list).
GroupPtr build_group(std::vector<Perm> generators,
                     std::optional<std::size_t> degree = std::nullopt);

bool same_group(const GroupPtr& a, const GroupPtr& b);

// Image list of a cycle-notation permutation, e.g. cycles {{0, 1}, {2, 3}}.
Perm perm_from_cycles(std::size_t degree, const std::vector<std::vector<std::uint32_t>>& cycles);

// A subgroup H <= G generated by the given elements of G. H is itself built as
// a FiniteGroup on the same points; `embedding[h]` is the index in G of
// element h of H.
struct Subgroup {
  GroupPtr parent;
  GroupPtr group;
  std::vector<std::size_t> generator_elements;
  std::vector<std::size_t> embedding;

  std::size_t index() const { return parent->order() / group->order(); }
  bool contains(std::size_t g) const;
  // Element of H whose embedding is g, if any.
  std::optional<std::size_t> local_index(std::size_t g) const;
};

Subgroup make_subgroup(const GroupPtr& parent, std::vector<std::size_t> generator_elements);

// Left coset representatives t_0 = 1, t_1, ...: for each coset the first
// element of the parent in breadth-first order.
std::vector<std::size_t> coset_transversal(const Subgroup& h);

}  // namespace relstab
