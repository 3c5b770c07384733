#include "relstab/group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace relstab {

namespace {

Perm compose(const Perm& a, const Perm& b) {
  Perm out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[x] = a[b[x]];
  return out;
}

void validate_perm(const Perm& p, std::size_t degree, std::size_t which) {
  if (p.size() != degree)
    throw GroupError("generator " + std::to_string(which) + " has " + std::to_string(p.size()) +
                     " images, expected degree " + std::to_string(degree));
  std::vector<bool> seen(degree, false);
  for (auto v : p) {
    if (v >= degree)
      throw GroupError("generator " + std::to_string(which) + " maps to " + std::to_string(v) +
                       ", outside 0.." + std::to_string(degree - 1));
    if (seen[v])
      throw GroupError("generator " + std::to_string(which) + " repeats image " +
                       std::to_string(v));
    seen[v] = true;
  }
}

std::uint64_t fnv(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

GroupPtr build_group(std::vector<Perm> generators, std::optional<std::size_t> degree) {
  const std::size_t n = degree ? *degree : (generators.empty() ? 0 : generators.front().size());
  for (std::size_t i = 0; i < generators.size(); ++i) validate_perm(generators[i], n, i);

  std::shared_ptr<FiniteGroup> g(new FiniteGroup());
  g->degree_ = n;
  g->generators_ = std::move(generators);

  Perm id(n);
  std::iota(id.begin(), id.end(), 0u);
  std::map<Perm, std::size_t> index;
  g->elements_.push_back(id);
  g->parent_.push_back(0);
  g->last_gen_.push_back(0);
  index.emplace(id, 0);
  for (std::size_t head = 0; head < g->elements_.size(); ++head) {
    for (std::size_t s = 0; s < g->generators_.size(); ++s) {
      Perm next = compose(g->generators_[s], g->elements_[head]);
      if (index.count(next)) continue;
      if (g->elements_.size() == kMaxGroupOrder)
        throw GroupError("group closure exceeds the order cap of " +
                         std::to_string(kMaxGroupOrder));
      index.emplace(next, g->elements_.size());
      g->elements_.push_back(std::move(next));
      g->parent_.push_back(head);
      g->last_gen_.push_back(s);
    }
  }

  const std::size_t order = g->elements_.size();
  g->table_.resize(order * order);
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b)
      g->table_[a * order + b] =
          static_cast<std::uint32_t>(index.at(compose(g->elements_[a], g->elements_[b])));
  g->inverse_.resize(order);
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b)
      if (g->table_[a * order + b] == 0) {
        g->inverse_[a] = b;
        break;
      }
  for (const auto& gen : g->generators_) g->generator_elements_.push_back(index.at(gen));

  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv(h, n);
  h = fnv(h, g->generators_.size());
  for (const auto& gen : g->generators_)
    for (auto v : gen) h = fnv(h, v);
  g->hash_ = h;
  return g;
}

std::optional<std::size_t> FiniteGroup::index_of(const Perm& perm) const {
  auto it = std::find(elements_.begin(), elements_.end(), perm);
  if (it == elements_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

std::vector<std::size_t> FiniteGroup::word(std::size_t e) const {
  std::vector<std::size_t> w;
  while (e != 0) {
    w.push_back(last_gen_.at(e));
    e = parent_[e];
  }
  return w;
}

std::size_t FiniteGroup::element_order(std::size_t a) const {
  std::size_t n = 1;
  for (std::size_t x = a; x != 0; x = mul(a, x)) ++n;
  return n;
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t a : generator_elements_)
    for (std::size_t b : generator_elements_)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

bool FiniteGroup::is_p_group(unsigned p) const {
  std::size_t n = order();
  while (n % p == 0) n /= p;
  return n == 1;
}

bool FiniteGroup::is_elementary_abelian(unsigned p) const {
  if (!is_p_group(p) || !is_abelian()) return false;
  for (std::size_t a = 1; a < order(); ++a)
    if (element_order(a) != p) return false;
  std::size_t expected = 1;
  for (std::size_t i = 0; i < num_generators(); ++i) expected *= p;
  return expected == order();
}

unsigned FiniteGroup::order_prime() const {
  const std::size_t n = order();
  for (unsigned d = 2; d <= n; ++d)
    if (n % d == 0) return d;
  return 0;
}

bool same_group(const GroupPtr& a, const GroupPtr& b) {
  return a == b || (a && b && *a == *b);
}

Perm perm_from_cycles(std::size_t degree, const std::vector<std::vector<std::uint32_t>>& cycles) {
  Perm p(degree);
  std::iota(p.begin(), p.end(), 0u);
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) p.at(c[i]) = c[(i + 1) % c.size()];
  return p;
}

bool Subgroup::contains(std::size_t g) const { return local_index(g).has_value(); }

std::optional<std::size_t> Subgroup::local_index(std::size_t g) const {
  auto it = std::find(embedding.begin(), embedding.end(), g);
  if (it == embedding.end()) return std::nullopt;
  return static_cast<std::size_t>(it - embedding.begin());
}

Subgroup make_subgroup(const GroupPtr& parent, std::vector<std::size_t> generator_elements) {
  std::vector<Perm> perms;
  for (auto e : generator_elements) {
    if (e >= parent->order())
      throw GroupError("subgroup generator " + std::to_string(e) + " is not an element of G");
    perms.push_back(parent->element(e));
  }
  Subgroup h;
  h.parent = parent;
  h.group = build_group(std::move(perms), parent->degree());
  h.generator_elements = std::move(generator_elements);
  for (std::size_t i = 0; i < h.group->order(); ++i)
    h.embedding.push_back(*parent->index_of(h.group->element(i)));
  return h;
}

std::vector<std::size_t> coset_transversal(const Subgroup& h) {
  const auto& g = *h.parent;
  std::vector<bool> covered(g.order(), false);
  std::vector<std::size_t> reps;
  for (std::size_t t = 0; t < g.order(); ++t) {
    if (covered[t]) continue;
    reps.push_back(t);
    for (auto x : h.embedding) covered[g.mul(t, x)] = true;
  }
  return reps;
}

}  // namespace relstab
