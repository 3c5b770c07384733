#include "relstab/decomposition.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace relstab {

namespace {

constexpr std::size_t kExhaustiveLimit = 65536;

// Rank of phi^(2^t) once the rank has stopped dropping, with that power.
std::pair<Matrix, std::size_t> stable_power(const Matrix& phi) {
  Matrix psi = phi;
  std::size_t r = rank(psi);
  while (r > 0) {
    Matrix sq = psi * psi;
    const std::size_t r2 = rank(sq);
    if (r2 == r) break;
    psi = std::move(sq);
    r = r2;
  }
  return {std::move(psi), r};
}

bool splits(const Matrix& phi) {
  const std::size_t n = phi.rows();
  const std::size_t r0 = rank(phi);
  if (r0 == n || r0 == 0) return false;
  const std::size_t r = stable_power(phi).second;
  return r > 0 && r < n;
}

std::size_t socle_dim(const GModule& m) {
  if (m.actions().empty()) return m.dim();
  Matrix stacked(m.field(), 0, m.dim());
  const Matrix id = Matrix::identity(m.field(), m.dim());
  for (const auto& a : m.actions()) stacked = vstack(stacked, a - id);
  return m.dim() - rank(stacked);
}

// End(M) with coordinates: x in End has coordinates rinv * x|_positions.
struct EndAlgebra {
  std::vector<Matrix> basis;
  std::vector<std::size_t> positions;
  Matrix rinv;

  std::vector<Scalar> coords(const Matrix& x) const {
    Matrix v(x.field(), positions.size(), 1);
    for (std::size_t i = 0; i < positions.size(); ++i) v(i, 0) = x.data()[positions[i]];
    return (rinv * v).column(0);
  }

  // Left multiplication by basis element i, as a d x d matrix.
  Matrix left_regular(std::size_t i) const {
    const FieldSpec f = basis.front().field();
    const std::size_t d = basis.size();
    Matrix l(f, d, d);
    for (std::size_t j = 0; j < d; ++j) {
      const auto c = coords(basis[i] * basis[j]);
      for (std::size_t k = 0; k < d; ++k) l(k, j) = c[k];
    }
    return l;
  }
};

EndAlgebra make_end_algebra(std::vector<Matrix> basis) {
  const FieldSpec f = basis.front().field();
  const std::size_t d = basis.size();
  Subspace s(f, basis.front().data().size());
  for (const auto& b : basis) s.insert(b.data());
  EndAlgebra e{std::move(basis), s.pivots(), Matrix(f, d, d)};
  Matrix r(f, d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) r(i, j) = e.basis[j].data()[e.positions[i]];
  e.rinv = *inverse(r);
  return e;
}

using BitRows = std::vector<std::uint32_t>;

BitRows bit_mul(const BitRows& a, const BitRows& b) {
  BitRows c(a.size(), 0);
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t k = 0; k < a.size(); ++k)
      if ((a[r] >> k) & 1u) c[r] ^= b[k];
  return c;
}

std::size_t bit_rank(BitRows rows) {
  std::size_t rk = 0;
  for (std::size_t c = 0; c < 32 && rk < rows.size(); ++c) {
    std::size_t sel = rows.size();
    for (std::size_t r = rk; r < rows.size(); ++r)
      if ((rows[r] >> c) & 1u) {
        sel = r;
        break;
      }
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[rk]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rk && ((rows[r] >> c) & 1u)) rows[r] ^= rows[rk];
    ++rk;
  }
  return rk;
}

bool bit_nilpotent(BitRows a) {
  for (std::size_t pw = 1; pw < a.size(); pw *= 2) a = bit_mul(a, a);
  return std::all_of(a.begin(), a.end(), [](std::uint32_t w) { return w == 0; });
}

// Exhaustive locality test of End. Returns a splitting element if End is not
// local, nullopt if every element is nilpotent or invertible.
std::optional<std::vector<Scalar>> exhaustive_search(const EndAlgebra& e) {
  const std::size_t d = e.basis.size();
  const FieldSpec f = e.basis.front().field();
  std::vector<Matrix> regs;
  for (std::size_t i = 0; i < d; ++i) regs.push_back(e.left_regular(i));

  if (f.p() == 2) {
    std::vector<BitRows> bits(d, BitRows(d, 0));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
          if (regs[i](r, c)) bits[i][r] |= 1u << c;
    BitRows cur(d, 0);
    std::uint32_t code = 0;
    for (std::uint32_t step = 1; step < (1u << d); ++step) {
      // Gray code: flip the lowest set bit of step.
      const unsigned flip = static_cast<unsigned>(__builtin_ctz(step));
      code ^= 1u << flip;
      for (std::size_t r = 0; r < d; ++r) cur[r] ^= bits[flip][r];
      if (bit_rank(cur) == d || bit_nilpotent(cur)) continue;
      std::vector<Scalar> c(d);
      for (std::size_t i = 0; i < d; ++i) c[i] = (code >> i) & 1u;
      return c;
    }
    return std::nullopt;
  }

  std::vector<Scalar> c(d, 0);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= f.p();
  for (std::size_t idx = 1; idx < total; ++idx) {
    std::size_t x = idx;
    for (std::size_t i = 0; i < d; ++i) {
      c[i] = static_cast<Scalar>(x % f.p());
      x /= f.p();
    }
    // One representative per projective point: first nonzero coefficient 1.
    const auto first = std::find_if(c.begin(), c.end(), [](Scalar s) { return s != 0; });
    if (*first != 1) continue;
    Matrix l(f, d, d);
    for (std::size_t i = 0; i < d; ++i)
      if (c[i]) l = l + regs[i].scaled(c[i]);
    if (rank(l) == d) continue;
    Matrix pw = l;
    for (std::size_t k = 1; k < d; k *= 2) pw = pw * pw;
    if (pw.is_zero()) continue;
    return c;
  }
  return std::nullopt;
}

struct Outcome {
  std::optional<Certificate> certificate;
  std::optional<Matrix> splitter;
};

Outcome certify_or_split(const GModule& m, const DecomposeOptions& opts) {
  const FieldSpec f = m.field();
  if (m.group().is_p_group(f.p())) {
    if (m.dim() - radical_basis(m).cols() == 1) return {Certificate::LocalTop, std::nullopt};
    if (socle_dim(m) == 1) return {Certificate::LocalSocle, std::nullopt};
  }
  const auto hb = hom_space(m, m);
  const std::size_t d = hb.dim();
  if (d == 1) return {Certificate::EndDimOne, std::nullopt};
  for (const auto& b : hb.basis)
    if (splits(b)) return {std::nullopt, b};

  std::size_t space = 1;
  bool small = true;
  for (std::size_t i = 0; i < d && small; ++i) {
    space *= f.p();
    small = space <= kExhaustiveLimit;
  }
  if (small) {
    const auto e = make_end_algebra(hb.basis);
    if (auto c = exhaustive_search(e)) return {std::nullopt, hb.combination(*c)};
    return {Certificate::Exhaustive, std::nullopt};
  }

  std::mt19937_64 rng(opts.seed * 0x9e3779b97f4a7c15ULL + m.dim());
  std::vector<Scalar> c(d);
  for (std::size_t trial = 0; trial < 64 * d; ++trial) {
    for (auto& x : c) x = static_cast<Scalar>(rng() % f.p());
    Matrix phi = hb.combination(c);
    if (splits(phi)) return {std::nullopt, std::move(phi)};
  }
  if (opts.require_exact)
    throw CertificationError("indecomposability of a module of dimension " +
                             std::to_string(m.dim()) + " (End of dimension " + std::to_string(d) +
                             ") could only be established by Monte-Carlo search");
  return {Certificate::MonteCarlo, std::nullopt};
}

struct Piece {
  GModule module;
  Matrix inclusion;  // into the original module
  Certificate certificate;
  ModuleKey key;
};

void split_recursive(const GModule& m, const Matrix& inclusion, const DecomposeOptions& opts,
                     std::vector<Piece>& out) {
  if (m.dim() == 0) return;
  auto oc = certify_or_split(m, opts);
  if (oc.certificate) {
    out.push_back({m, inclusion, *oc.certificate, module_key(m)});
    return;
  }
  auto fs = fitting_split(GMap::trusted(m, m, *oc.splitter));
  if (!fs) throw VerificationError("splitting endomorphism failed to split");
  split_recursive(fs->kernel_part, inclusion * fs->kernel_inclusion, opts, out);
  split_recursive(fs->image_part, inclusion * fs->image_inclusion, opts, out);
}

}  // namespace

std::optional<FittingSplit> fitting_split(const GMap& phi) {
  const GModule& m = phi.source();
  if (phi.target().dim() != m.dim()) throw DimensionError("fitting_split: not an endomorphism");
  const std::size_t n = m.dim();
  if (n == 0) return std::nullopt;
  auto [psi, r] = stable_power(phi.matrix());
  if (r == 0 || r == n) return std::nullopt;
  const Matrix k = kernel_basis(psi);
  const Matrix im = column_basis(psi);
  auto a = submodule(m, k);
  auto b = submodule(m, im);
  Matrix iso = hstack(k, im);
  GModule sum = direct_sum_module(a.module, b.module);
  return FittingSplit{a.module, b.module, k, im, GMap::trusted(sum, m, std::move(iso))};
}

std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::LocalTop: return "local-top";
    case Certificate::LocalSocle: return "local-socle";
    case Certificate::EndDimOne: return "end-dim-one";
    case Certificate::Exhaustive: return "exhaustive";
    case Certificate::MonteCarlo: return "monte-carlo";
  }
  return "unknown";
}

ModuleKey module_key(const GModule& m) {
  ModuleKey key{m.dim()};
  const Matrix id = Matrix::identity(m.field(), m.dim());
  for (const auto& a : m.actions()) {
    const Matrix n = a - id;
    Matrix pw = n;
    for (std::size_t i = 1; i <= m.dim(); ++i) {
      const std::size_t r = rank(pw);
      key.push_back(r);
      if (r == 0) break;
      pw = pw * n;
    }
  }
  return key;
}

Matrix Decomposition::block_inclusion(std::size_t b) const {
  const std::size_t d = summands.at(block_summand.at(b)).module.dim();
  return iso.matrix().block(0, block_offset[b], original.dim(), d);
}

Matrix Decomposition::block_projection(std::size_t b) const {
  const std::size_t d = summands.at(block_summand.at(b)).module.dim();
  return iso_inverse.block(block_offset[b], 0, d, original.dim());
}

GModule Decomposition::assembled() const { return iso.source(); }

std::optional<Matrix> indecomposable_iso(const GModule& m, const GModule& n) {
  if (m.dim() != n.dim()) return std::nullopt;
  if (m.dim() == 0) return Matrix(m.field(), 0, 0);
  for (const auto& t : hom_space(m, n).basis)
    if (rank(t) == m.dim()) return t;
  return std::nullopt;
}

Decomposition krull_schmidt(const GModule& m, const DecomposeOptions& opts) {
  std::vector<Piece> pieces;
  split_recursive(m, Matrix::identity(m.field(), m.dim()), opts, pieces);
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece& a, const Piece& b) { return a.key < b.key; });

  struct Group {
    std::size_t rep;
    std::vector<Matrix> inclusions;  // rep -> original
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    bool placed = false;
    for (auto& g : groups) {
      if (pieces[g.rep].key != pieces[i].key) continue;
      if (auto theta = indecomposable_iso(pieces[g.rep].module, pieces[i].module)) {
        g.inclusions.push_back(pieces[i].inclusion * *theta);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({i, {pieces[i].inclusion}});
  }

  Decomposition d{m, {}, GMap::identity(m), Matrix(m.field(), 0, 0), {}, {}};
  std::vector<Matrix> cols;
  std::vector<GModule> parts;
  std::size_t offset = 0;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& piece = pieces[groups[gi].rep];
    d.summands.push_back({piece.module, groups[gi].inclusions.size(), piece.certificate});
    for (const auto& inc : groups[gi].inclusions) {
      cols.push_back(inc);
      parts.push_back(piece.module);
      d.block_summand.push_back(gi);
      d.block_offset.push_back(offset);
      offset += piece.module.dim();
    }
  }
  Matrix iso = hstack(m.field(), m.dim(), cols);
  auto inv = inverse(iso);
  if (!inv) throw VerificationError("krull_schmidt: assembled map is not invertible");
  d.iso = GMap(direct_sum_module(m.group_ptr(), m.field(), parts), m, std::move(iso));
  d.iso_inverse = std::move(*inv);
  return d;
}

IsoResult is_isomorphic(const Decomposition& dm, const Decomposition& dn) {
  const GModule& m = dm.original;
  const GModule& n = dn.original;
  require_compatible(m, n, "is_isomorphic");
  if (m.dim() != n.dim() || dm.summands.size() != dn.summands.size()) return {};
  // match[i] = summand of n isomorphic to summand i of m, with the iso.
  std::vector<std::size_t> match(dm.summands.size());
  std::vector<Matrix> theta;
  std::vector<bool> used(dn.summands.size(), false);
  for (std::size_t i = 0; i < dm.summands.size(); ++i) {
    const auto& si = dm.summands[i];
    const ModuleKey ki = module_key(si.module);
    bool found = false;
    for (std::size_t j = 0; j < dn.summands.size() && !found; ++j) {
      const auto& sj = dn.summands[j];
      if (used[j] || sj.multiplicity != si.multiplicity || module_key(sj.module) != ki) continue;
      if (auto t = indecomposable_iso(si.module, sj.module)) {
        used[j] = true;
        match[i] = j;
        theta.push_back(std::move(*t));
        found = true;
      }
    }
    if (!found) return {};
  }
  // Copy c of summand i in m goes to copy c of summand match[i] in n.
  std::vector<std::vector<std::size_t>> blocks_n(dn.summands.size());
  for (std::size_t b = 0; b < dn.block_count(); ++b) blocks_n[dn.block_summand[b]].push_back(b);
  std::vector<std::size_t> seen(dm.summands.size(), 0);
  Matrix w(m.field(), n.dim(), m.dim());
  for (std::size_t b = 0; b < dm.block_count(); ++b) {
    const std::size_t i = dm.block_summand[b];
    const std::size_t bn = blocks_n[match[i]][seen[i]++];
    w = w + dn.block_inclusion(bn) * theta[i] * dm.block_projection(b);
  }
  if (rank(w) != m.dim()) throw VerificationError("is_isomorphic: assembled witness not invertible");
  return {true, GMap(m, n, std::move(w))};
}

IsoResult is_isomorphic(const GModule& m, const GModule& n, const DecomposeOptions& opts) {
  require_compatible(m, n, "is_isomorphic");
  if (m.dim() != n.dim()) return {};
  if (m == n) return {true, GMap::identity(m)};
  if (module_key(m) != module_key(n)) return {};
  return is_isomorphic(krull_schmidt(m, opts), krull_schmidt(n, opts));
}

bool is_indecomposable(const GModule& m, const DecomposeOptions& opts) {
  if (m.dim() == 0) throw ModuleError("is_indecomposable: zero module");
  return certify_or_split(m, opts).certificate.has_value();
}

std::string describe(const Decomposition& d) {
  if (d.summands.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& s : d.summands)
    for (std::size_t c = 0; c < s.multiplicity; ++c) {
      if (!first) os << " + ";
      os << "M" << s.module.dim();
      first = false;
    }
  return os.str();
}

}  // namespace relstab
