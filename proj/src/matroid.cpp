#include "sposs/matroid.hpp"

#include <algorithm>
#include <numeric>

#include "sposs/error.hpp"

namespace sposs {

struct MatroidOracle::Base {
  MatroidFamily family;
  ElementSet ground;
  // Partition: block index per element id, -1 outside every block.
  std::vector<long> block_of;
  // Explicit: sorted list of independent sets.
  std::vector<ElementSet> independent_sorted;

  bool independent(const ElementSet& s) const;
};

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

bool MatroidOracle::Base::independent(const ElementSet& s) const {
  return std::visit(
      [&](const auto& fam) -> bool {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, UniformFamily>) {
          return s.size() <= fam.r;
        } else if constexpr (std::is_same_v<T, PartitionFamily>) {
          std::vector<std::size_t> used(fam.blocks.size(), 0);
          for (ElementId e : s) {
            long b = e < block_of.size() ? block_of[e] : -1;
            if (b < 0) return false;
            if (++used[static_cast<std::size_t>(b)] > fam.caps[b]) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, GraphicFamily>) {
          DisjointSets dsu(fam.vertices);
          for (ElementId e : s) {
            const auto& [u, v] = fam.edges[e];
            if (!dsu.unite(u, v)) return false;
          }
          return true;
        } else {
          return std::binary_search(independent_sorted.begin(),
                                    independent_sorted.end(), s);
        }
      },
      family);
}

MatroidOracle::MatroidOracle(std::shared_ptr<const Base> base)
    : base_(std::move(base)), ground_(base_->ground) {}

MatroidOracle MatroidOracle::uniform(std::size_t n, std::size_t r) {
  auto base = std::make_shared<Base>();
  base->family = UniformFamily{n, r};
  base->ground = ElementSet::range(n);
  return MatroidOracle(std::move(base));
}

MatroidOracle MatroidOracle::partition(
    std::vector<std::vector<ElementId>> blocks, std::vector<std::size_t> caps) {
  if (blocks.size() != caps.size()) {
    throw InvalidArgumentError("partition matroid needs one cap per block");
  }
  auto base = std::make_shared<Base>();
  std::vector<ElementId> all;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (ElementId e : blocks[b]) {
      if (e >= base->block_of.size()) base->block_of.resize(e + 1, -1);
      if (base->block_of[e] != -1) {
        throw InvalidArgumentError("partition blocks overlap at element " +
                                   std::to_string(e));
      }
      base->block_of[e] = static_cast<long>(b);
      all.push_back(e);
    }
  }
  base->ground = ElementSet(std::move(all));
  base->family = PartitionFamily{std::move(blocks), std::move(caps)};
  return MatroidOracle(std::move(base));
}

MatroidOracle MatroidOracle::graphic(
    std::size_t vertices,
    std::vector<std::pair<std::size_t, std::size_t>> edges) {
  for (const auto& [u, v] : edges) {
    if (u >= vertices || v >= vertices) {
      throw InvalidArgumentError("graphic matroid edge endpoint out of range");
    }
  }
  auto base = std::make_shared<Base>();
  base->ground = ElementSet::range(edges.size());
  base->family = GraphicFamily{vertices, std::move(edges)};
  return MatroidOracle(std::move(base));
}

MatroidOracle MatroidOracle::explicit_family(
    std::vector<ElementId> ground, std::vector<ElementSet> independent) {
  ElementSet g(std::move(ground));
  if (g.size() > kExplicitGroundLimit) {
    throw SizeLimitError("explicit matroid limited to " +
                         std::to_string(kExplicitGroundLimit) + " elements");
  }
  std::sort(independent.begin(), independent.end());
  independent.erase(std::unique(independent.begin(), independent.end()),
                    independent.end());
  if (!std::binary_search(independent.begin(), independent.end(),
                          ElementSet{})) {
    throw PreconditionError("explicit family must contain the empty set");
  }
  for (const ElementSet& s : independent) {
    if (!s.is_subset_of(g)) {
      throw PreconditionError("explicit family set " + s.to_string() +
                              " leaves the ground set");
    }
    for (ElementId e : s) {
      if (!std::binary_search(independent.begin(), independent.end(),
                              s.without(e))) {
        throw PreconditionError("explicit family is not downward closed at " +
                                s.to_string());
      }
    }
  }
  auto base = std::make_shared<Base>();
  base->ground = g;
  base->independent_sorted = independent;
  base->family =
      ExplicitFamily{std::vector<ElementId>(g.begin(), g.end()), independent};
  return MatroidOracle(std::move(base));
}

const MatroidFamily& MatroidOracle::family() const { return base_->family; }

std::string MatroidOracle::family_name() const {
  switch (base_->family.index()) {
    case 0: return "uniform";
    case 1: return "partition";
    case 2: return "graphic";
    default: return "explicit";
  }
}

void MatroidOracle::check_in_ground(const ElementSet& s, const char* op) const {
  if (!s.is_subset_of(ground_)) {
    throw DomainError(std::string(op) + ": " + s.to_string() +
                      " is not contained in the view ground set");
  }
}

bool MatroidOracle::independent_unchecked(const ElementSet& s) const {
  if (contracted_.empty()) return base_->independent(s);
  return base_->independent(set_union(s, contracted_));
}

bool MatroidOracle::is_independent(const ElementSet& s) const {
  check_in_ground(s, "is_independent");
  return independent_unchecked(s);
}

std::size_t MatroidOracle::rank(const ElementSet& s) const {
  check_in_ground(s, "rank");
  ElementSet basis;
  for (ElementId e : s) {
    ElementSet grown = basis.with(e);
    if (independent_unchecked(grown)) basis = std::move(grown);
  }
  return basis.size();
}

std::size_t MatroidOracle::rank() const { return rank(ground_); }

ElementSet MatroidOracle::span(const ElementSet& s) const {
  check_in_ground(s, "span");
  ElementSet basis;
  for (ElementId e : s) {
    ElementSet grown = basis.with(e);
    if (independent_unchecked(grown)) basis = std::move(grown);
  }
  ElementSet out;
  for (ElementId e : ground_) {
    if (s.contains(e) || !independent_unchecked(basis.with(e))) out.insert(e);
  }
  return out;
}

MatroidOracle MatroidOracle::contracted(const ElementSet& s) const {
  check_in_ground(s, "contract");
  if (!independent_unchecked(s)) {
    throw PreconditionError("contract: " + s.to_string() +
                            " is dependent in the current view");
  }
  MatroidOracle out = *this;
  out.ground_ = set_difference(ground_, s);
  out.contracted_ = set_union(contracted_, s);
  out.views_.push_back({ViewOp::Kind::kContract, s});
  return out;
}

MatroidOracle MatroidOracle::deleted(const ElementSet& s) const {
  check_in_ground(s, "delete");
  MatroidOracle out = *this;
  out.ground_ = set_difference(ground_, s);
  out.views_.push_back({ViewOp::Kind::kDelete, s});
  return out;
}

MatroidOracle MatroidOracle::restricted(const ElementSet& s) const {
  check_in_ground(s, "restrict");
  MatroidOracle out = *this;
  out.ground_ = s;
  out.views_.push_back({ViewOp::Kind::kRestrict, s});
  return out;
}

ElementSet MatroidOracle::max_weight_independent(const WeightVector& w) const {
  std::vector<ElementId> order(ground_.begin(), ground_.end());
  for (ElementId e : order) {
    if (e >= w.size()) {
      throw DomainError("weight vector has no entry for element " +
                        std::to_string(e));
    }
    if (!(w[e] >= 0.0)) {
      throw InvalidArgumentError("weights must be nonnegative");
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](ElementId a, ElementId b) {
    return w[a] > w[b];
  });
  ElementSet basis;
  for (ElementId e : order) {
    ElementSet grown = basis.with(e);
    if (independent_unchecked(grown)) basis = std::move(grown);
  }
  return basis;
}

ElementSet MatroidOracle::find_circuit(const ElementSet& s, ElementId e) const {
  check_in_ground(s.with(e), "find_circuit");
  if (s.contains(e)) {
    throw PreconditionError("find_circuit: element already in the set");
  }
  if (!independent_unchecked(s)) {
    throw PreconditionError("find_circuit: base set is dependent");
  }
  if (independent_unchecked(s.with(e))) {
    throw NoCircuitError("find_circuit: element " + std::to_string(e) +
                         " is not spanned by " + s.to_string());
  }
  ElementSet circuit{e};
  for (ElementId f : s) {
    if (independent_unchecked(s.without(f).with(e))) circuit.insert(f);
  }
  return circuit;
}

ElementId MatroidOracle::find_exchange_pair(const ElementSet& s1,
                                            const ElementSet& s2,
                                            ElementId e) const {
  check_in_ground(s1, "find_exchange_pair");
  check_in_ground(s2, "find_exchange_pair");
  if (!independent_unchecked(s1) || !independent_unchecked(s2)) {
    throw PreconditionError("find_exchange_pair: inputs must be independent");
  }
  if (!s1.contains(e) || s2.contains(e)) {
    throw PreconditionError("find_exchange_pair: element must lie in S1∖S2");
  }
  if (independent_unchecked(s2.with(e))) {
    throw PreconditionError("find_exchange_pair: element is not spanned by S2");
  }
  const ElementSet circuit = find_circuit(s2, e);
  const ElementSet s1_minus_e = s1.without(e);
  for (ElementId f : circuit) {
    if (f == e || s1.contains(f)) continue;
    if (independent_unchecked(s1_minus_e.with(f)) &&
        independent_unchecked(s2.without(f).with(e))) {
      return f;
    }
  }
  throw InvariantError("find_exchange_pair: no exchange partner for element " +
                       std::to_string(e) + " (oracle is not a matroid?)");
}

}  // namespace sposs
