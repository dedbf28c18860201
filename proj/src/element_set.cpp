#include "sposs/element_set.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

#include "sposs/error.hpp"

namespace sposs {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kSizeLimit: return "size_limit";
    case ErrorCode::kKind: return "kind";
    case ErrorCode::kNoCircuit: return "no_circuit";
    case ErrorCode::kInvariant: return "invariant";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

ElementSet::ElementSet(std::initializer_list<ElementId> ids)
    : ElementSet(std::vector<ElementId>(ids)) {}

ElementSet::ElementSet(std::vector<ElementId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

ElementSet ElementSet::range(std::size_t n) {
  ElementSet s;
  s.ids_.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.ids_[i] = static_cast<ElementId>(i);
  return s;
}

bool ElementSet::contains(ElementId e) const {
  return std::binary_search(ids_.begin(), ids_.end(), e);
}

void ElementSet::insert(ElementId e) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), e);
  if (it == ids_.end() || *it != e) ids_.insert(it, e);
}

void ElementSet::erase(ElementId e) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), e);
  if (it != ids_.end() && *it == e) ids_.erase(it);
}

bool ElementSet::is_subset_of(const ElementSet& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(),
                       ids_.end());
}

ElementSet ElementSet::with(ElementId e) const {
  ElementSet s = *this;
  s.insert(e);
  return s;
}

ElementSet ElementSet::without(ElementId e) const {
  ElementSet s = *this;
  s.erase(e);
  return s;
}

std::string ElementSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i) os << ',';
    os << ids_[i];
  }
  os << '}';
  return os.str();
}

ElementSet set_union(const ElementSet& a, const ElementSet& b) {
  std::vector<ElementId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return ElementSet(std::move(out));
}

ElementSet set_intersection(const ElementSet& a, const ElementSet& b) {
  std::vector<ElementId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return ElementSet(std::move(out));
}

ElementSet set_difference(const ElementSet& a, const ElementSet& b) {
  std::vector<ElementId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return ElementSet(std::move(out));
}

ElementSet subset_from_mask(const ElementSet& universe, std::uint64_t mask) {
  std::vector<ElementId> out;
  for (std::size_t i = 0; i < universe.size() && i < 64; ++i) {
    if (mask >> i & 1u) out.push_back(universe[i]);
  }
  return ElementSet(std::move(out));
}

double total_weight(const WeightVector& w, const ElementSet& s) {
  double sum = 0.0;
  for (ElementId e : s) {
    if (e >= w.size()) {
      throw DomainError("weight vector has no entry for element " +
                        std::to_string(e));
    }
    sum += w[e];
  }
  return sum;
}

}  // namespace sposs
