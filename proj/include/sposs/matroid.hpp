#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sposs/element_set.hpp"

namespace sposs {

struct UniformFamily {
  std::size_t n = 0;
  std::size_t r = 0;
};

/// Element e is independent-feasible while each block holds at most its cap.
/// Elements outside every block are loops.
struct PartitionFamily {
  std::vector<std::vector<ElementId>> blocks;
  std::vector<std::size_t> caps;
};

/// Edges are the elements; edge i joins endpoints edges[i]. Self-loops are
/// dependent on their own.
struct GraphicFamily {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Brute-force family: every independent set listed. Tests only.
struct ExplicitFamily {
  std::vector<ElementId> ground;
  std::vector<ElementSet> independent;
};

using MatroidFamily =
    std::variant<UniformFamily, PartitionFamily, GraphicFamily, ExplicitFamily>;

inline constexpr std::size_t kExplicitGroundLimit = 20;

struct ViewOp {
  enum class Kind { kContract, kDelete, kRestrict };
  Kind kind;
  ElementSet set;
};

/// Independence oracle over an indexed ground set, plus lazily composed
/// contraction/deletion/restriction views. A view is answered by translating
/// the query to the base family: S is independent in the view iff
/// S lies in the view ground and S ∪ C is independent in the base, where C is
/// the union of all contracted sets. Immutable; copies share the base.
class MatroidOracle {
 public:
  static MatroidOracle uniform(std::size_t n, std::size_t r);
  static MatroidOracle partition(std::vector<std::vector<ElementId>> blocks,
                                 std::vector<std::size_t> caps);
  static MatroidOracle graphic(
      std::size_t vertices,
      std::vector<std::pair<std::size_t, std::size_t>> edges);
  /// Throws PreconditionError unless the family contains ∅ and is downward
  /// closed; throws SizeLimitError above kExplicitGroundLimit elements.
  static MatroidOracle explicit_family(std::vector<ElementId> ground,
                                       std::vector<ElementSet> independent);

  const ElementSet& ground() const { return ground_; }
  const ElementSet& contracted_set() const { return contracted_; }
  const std::vector<ViewOp>& view_stack() const { return views_; }
  const MatroidFamily& family() const;
  std::string family_name() const;

  bool is_independent(const ElementSet& s) const;
  /// Size of a maximum independent subset, by greedy insertion.
  std::size_t rank(const ElementSet& s) const;
  /// Rank of the whole view.
  std::size_t rank() const;
  ElementSet span(const ElementSet& s) const;

  MatroidOracle contracted(const ElementSet& s) const;
  MatroidOracle deleted(const ElementSet& s) const;
  MatroidOracle restricted(const ElementSet& s) const;

  /// Greedy in nonincreasing weight order, ties broken by ascending id.
  ElementSet max_weight_independent(const WeightVector& w) const;

  /// The unique circuit in S ∪ {e}. Requires S independent, e ∉ S. Throws
  /// NoCircuitError if e is not spanned by S.
  ElementSet find_circuit(const ElementSet& s, ElementId e) const;

  /// f ∈ S2∖S1 with S1−e+f and S2−f+e both independent. Scans the circuit of
  /// e in S2 in ascending id and returns the first f passing both checks.
  ElementId find_exchange_pair(const ElementSet& s1, const ElementSet& s2,
                               ElementId e) const;

 private:
  struct Base;
  explicit MatroidOracle(std::shared_ptr<const Base> base);

  void check_in_ground(const ElementSet& s, const char* op) const;
  bool independent_unchecked(const ElementSet& s) const;

  std::shared_ptr<const Base> base_;
  ElementSet ground_;
  ElementSet contracted_;
  std::vector<ViewOp> views_;
};

inline MatroidOracle contract(const MatroidOracle& m, const ElementSet& s) {
  return m.contracted(s);
}
inline MatroidOracle delete_elements(const MatroidOracle& m,
                                     const ElementSet& s) {
  return m.deleted(s);
}
inline MatroidOracle restrict_to(const MatroidOracle& m, const ElementSet& s) {
  return m.restricted(s);
}

}  // namespace sposs
