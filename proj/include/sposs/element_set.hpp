#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace sposs {

/// Index of an element of the ground set. Views and derived systems remap
/// feasibility, never identity.
using ElementId = std::uint32_t;

/// Per-element nonnegative weights, indexed by ElementId.
using WeightVector = std::vector<double>;

/// Sorted set of element ids with value semantics.
class ElementSet {
 public:
  using const_iterator = std::vector<ElementId>::const_iterator;

  ElementSet() = default;
  ElementSet(std::initializer_list<ElementId> ids);
  explicit ElementSet(std::vector<ElementId> ids);

  /// {0, 1, ..., n-1}
  static ElementSet range(std::size_t n);

  bool contains(ElementId e) const;
  void insert(ElementId e);
  void erase(ElementId e);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const_iterator begin() const { return ids_.begin(); }
  const_iterator end() const { return ids_.end(); }
  ElementId operator[](std::size_t i) const { return ids_[i]; }
  const std::vector<ElementId>& ids() const { return ids_; }

  bool is_subset_of(const ElementSet& other) const;

  ElementSet with(ElementId e) const;
  ElementSet without(ElementId e) const;

  std::string to_string() const;

  friend bool operator==(const ElementSet&, const ElementSet&) = default;
  friend auto operator<=>(const ElementSet&, const ElementSet&) = default;

 private:
  std::vector<ElementId> ids_;
};

ElementSet set_union(const ElementSet& a, const ElementSet& b);
ElementSet set_intersection(const ElementSet& a, const ElementSet& b);
ElementSet set_difference(const ElementSet& a, const ElementSet& b);

/// Members of `universe` selected by the bits of `mask` (bit i = universe[i]).
ElementSet subset_from_mask(const ElementSet& universe, std::uint64_t mask);

double total_weight(const WeightVector& w, const ElementSet& s);

}  // namespace sposs
