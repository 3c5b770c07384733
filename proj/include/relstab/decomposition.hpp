#pragma once

// Krull-Schmidt decomposition, indecomposability certificates and
// isomorphism testing.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relstab/module.hpp"

namespace relstab {

// Kernel and image parts of the Fitting decomposition of an endomorphism.
struct FittingSplit {
  GModule kernel_part;
  GModule image_part;
  Matrix kernel_inclusion;
  Matrix image_inclusion;
  // kernel_part (+) image_part -> M, invertible.
  GMap iso;
};

// Absent when phi is nilpotent or invertible.
std::optional<FittingSplit> fitting_split(const GMap& phi);

enum class Certificate {
  LocalTop,     // p-group module with one-dimensional top
  LocalSocle,   // p-group module with one-dimensional socle
  EndDimOne,    // End(M) = k
  Exhaustive,   // every endomorphism checked nilpotent or invertible
  MonteCarlo,   // no splitting endomorphism among 64 * dim End seeded trials
};

std::string to_string(Certificate c);

// (dim, then for each generator g the ranks of (g - 1)^i, i = 1, 2, ... until
// zero). Equal for isomorphic modules.
using ModuleKey = std::vector<std::size_t>;
ModuleKey module_key(const GModule& m);

struct Summand {
  GModule module;
  std::size_t multiplicity;
  Certificate certificate;
};

struct Decomposition {
  GModule original;
  // Sorted by key; isomorphic copies collected into one entry.
  std::vector<Summand> summands;
  // From the direct sum of all copies (summands in order, each repeated
  // multiplicity times) to original.
  GMap iso;
  Matrix iso_inverse;
  // For each copy in the direct sum: index into summands and column offset.
  std::vector<std::size_t> block_summand;
  std::vector<std::size_t> block_offset;

  std::size_t block_count() const noexcept { return block_summand.size(); }
  // Columns of iso for block b, and the matching rows of iso_inverse.
  Matrix block_inclusion(std::size_t b) const;
  Matrix block_projection(std::size_t b) const;
  // Direct sum of all copies, the source of iso.
  GModule assembled() const;
};

struct DecomposeOptions {
  std::uint64_t seed = 1;
  // Refuse Monte-Carlo certificates (throw CertificationError instead).
  bool require_exact = false;
};

Decomposition krull_schmidt(const GModule& m, const DecomposeOptions& opts = {});

// Isomorphism test between indecomposables of equal key: some element of a
// basis of Hom(M, N) is invertible exactly when M and N are isomorphic.
std::optional<Matrix> indecomposable_iso(const GModule& m, const GModule& n);

struct IsoResult {
  bool isomorphic = false;
  std::optional<GMap> witness;
};

IsoResult is_isomorphic(const GModule& m, const GModule& n, const DecomposeOptions& opts = {});
IsoResult is_isomorphic(const Decomposition& m, const Decomposition& n);

bool is_indecomposable(const GModule& m, const DecomposeOptions& opts = {});

// Indecomposable summands with multiplicities, ignoring the isomorphism.
std::string describe(const Decomposition& d);

}  // namespace relstab
