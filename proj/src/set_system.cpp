#include "sposs/set_system.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "sposs/error.hpp"

namespace sposs {

bool Graph::is_bipartite() const {
  std::vector<std::vector<std::size_t>> adj(vertices);
  for (const auto& [u, v] : edges) {
    if (u == v) return false;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> color(vertices, -1);
  for (std::size_t s = 0; s < vertices; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          queue.push_back(v);
        } else if (color[v] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

std::vector<int> two_coloring(const Graph& g) {
  std::vector<std::vector<std::size_t>> adj(g.vertices);
  for (const auto& [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> color(g.vertices, -1);
  for (std::size_t s = 0; s < g.vertices; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u]) {
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          queue.push_back(v);
        }
      }
    }
  }
  return color;
}

// Depth-first branch and bound over candidates sorted by weight descending.
// `can_add(cur, e)` tests feasibility of cur + e.
template <typename CanAdd, typename OnAdd, typename OnRemove>
ElementSet branch_and_bound(const std::vector<ElementId>& cand,
                            const WeightVector& w, CanAdd can_add,
                            OnAdd on_add, OnRemove on_remove) {
  const std::size_t n = cand.size();
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + w[cand[i]];

  std::vector<ElementId> cur;
  std::vector<ElementId> best;
  double best_w = 0.0;

  auto dfs = [&](auto&& self, std::size_t i, double cur_w) -> void {
    if (cur_w > best_w) {
      best_w = cur_w;
      best = cur;
    }
    if (i == n || cur_w + suffix[i] <= best_w) return;
    ElementId e = cand[i];
    if (can_add(cur, e)) {
      cur.push_back(e);
      on_add(e);
      self(self, i + 1, cur_w + w[e]);
      on_remove(e);
      cur.pop_back();
    }
    self(self, i + 1, cur_w);
  };
  dfs(dfs, 0, 0.0);
  return ElementSet(std::move(best));
}

std::vector<ElementId> by_weight_desc(const WeightVector& w,
                                      std::vector<ElementId> ids) {
  std::stable_sort(ids.begin(), ids.end(),
                   [&](ElementId a, ElementId b) { return w[a] > w[b]; });
  return ids;
}

void check_weights(const WeightVector& w, const ElementSet& s) {
  for (ElementId e : s) {
    if (e >= w.size()) {
      throw DomainError("weight vector has no entry for element " +
                        std::to_string(e));
    }
    if (!(w[e] >= 0.0)) throw InvalidArgumentError("weights must be nonnegative");
  }
}

}  // namespace

SetSystem SetSystem::single_matroid(MatroidOracle m) {
  SetSystem sys;
  sys.kind_ = Kind::kSingleMatroid;
  sys.ground_ = m.ground();
  sys.matroids_.push_back(std::move(m));
  sys.init_rank();
  return sys;
}

SetSystem SetSystem::intersection(std::vector<MatroidOracle> ms) {
  if (ms.empty()) {
    throw InvalidArgumentError("intersection needs at least one matroid");
  }
  for (const auto& m : ms) {
    if (m.ground() != ms.front().ground()) {
      throw InvalidArgumentError(
          "intersection matroids must share one ground set");
    }
  }
  SetSystem sys;
  sys.kind_ = Kind::kIntersection;
  sys.ground_ = ms.front().ground();
  sys.matroids_ = std::move(ms);
  sys.init_rank();
  return sys;
}

SetSystem SetSystem::matching(Graph g) {
  for (const auto& [u, v] : g.edges) {
    if (u >= g.vertices || v >= g.vertices) {
      throw InvalidArgumentError("matching edge endpoint out of range");
    }
    if (u == v) throw InvalidArgumentError("matching graph has a self-loop");
  }
  SetSystem sys;
  sys.kind_ = Kind::kMatching;
  sys.ground_ = ElementSet::range(g.edges.size());
  sys.bipartite_ = g.is_bipartite();
  sys.graph_ = std::move(g);
  sys.init_rank();
  return sys;
}

SetSystem SetSystem::rank1(std::size_t n) {
  SetSystem sys;
  sys.kind_ = Kind::kRank1;
  sys.ground_ = ElementSet::range(n);
  sys.rank_ = {n > 0 ? 1u : 0u, true};
  return sys;
}

SetSystem SetSystem::blocks(std::size_t m, std::size_t k) {
  SetSystem sys;
  sys.kind_ = Kind::kBlocks;
  sys.block_m_ = m;
  sys.block_k_ = k;
  sys.ground_ = ElementSet::range(m * k);
  sys.rank_ = {m > 0 ? k : 0, true};
  return sys;
}

std::string SetSystem::kind_name() const {
  switch (kind_) {
    case Kind::kSingleMatroid: return "matroid";
    case Kind::kIntersection: return "intersection";
    case Kind::kMatching: return "matching";
    case Kind::kRank1: return "rank1";
    case Kind::kBlocks: return "blocks";
  }
  return "unknown";
}

void SetSystem::init_rank() {
  switch (kind_) {
    case Kind::kSingleMatroid:
      rank_ = {matroids_.front().rank(), true};
      return;
    case Kind::kMatching:
    case Kind::kIntersection: {
      WeightVector ones(ground_.empty() ? 0 : ground_.ids().back() + 1, 1.0);
      if (kind_ == Kind::kMatching && bipartite_) {
        rank_ = {bipartite_matching(ones, ground_).elements.size(), true};
        return;
      }
      if (ground_.size() <= kExactRankLimit) {
        rank_ = {max_weight_feasible(ones, ground_).elements.size(), true};
      } else {
        rank_ = {greedy_weight_feasible(ones, ground_).elements.size(), false};
      }
      return;
    }
    default:
      return;
  }
}

void SetSystem::check_in_ground(const ElementSet& s) const {
  if (!s.is_subset_of(ground_)) {
    throw DomainError(s.to_string() + " is not contained in the ground set");
  }
}

bool SetSystem::is_feasible(const ElementSet& s) const {
  check_in_ground(s);
  switch (kind_) {
    case Kind::kSingleMatroid:
    case Kind::kIntersection:
      return std::all_of(matroids_.begin(), matroids_.end(),
                         [&](const MatroidOracle& m) {
                           return m.is_independent(s);
                         });
    case Kind::kMatching: {
      std::vector<char> used(graph_.vertices, 0);
      for (ElementId e : s) {
        const auto& [u, v] = graph_.edges[e];
        if (used[u] || used[v]) return false;
        used[u] = used[v] = 1;
      }
      return true;
    }
    case Kind::kRank1:
      return s.size() <= 1;
    case Kind::kBlocks:
      return s.empty() || s.ids().front() / block_k_ == s.ids().back() / block_k_;
  }
  return false;
}

FeasibleSet SetSystem::max_weight_feasible(const WeightVector& w,
                                           const ElementSet& s) const {
  check_in_ground(s);
  check_weights(w, s);
  switch (kind_) {
    case Kind::kSingleMatroid: {
      ElementSet best = matroids_.front().restricted(s).max_weight_independent(w);
      return {best, total_weight(w, best)};
    }
    case Kind::kIntersection:
      return search_intersection(w, s);
    case Kind::kMatching:
      return bipartite_ ? bipartite_matching(w, s) : search_matching(w, s);
    case Kind::kRank1: {
      if (s.empty()) return {};
      ElementId best = s[0];
      for (ElementId e : s) {
        if (w[e] > w[best]) best = e;
      }
      return {ElementSet{best}, w[best]};
    }
    case Kind::kBlocks: {
      if (s.empty()) return {};
      std::size_t best_block = s[0] / block_k_;
      double best_w = -1.0;
      std::map<std::size_t, double> sums;
      for (ElementId e : s) sums[e / block_k_] += w[e];
      for (const auto& [b, sum] : sums) {
        if (sum > best_w) {
          best_w = sum;
          best_block = b;
        }
      }
      std::vector<ElementId> picked;
      for (ElementId e : s) {
        if (e / block_k_ == best_block) picked.push_back(e);
      }
      return {ElementSet(std::move(picked)), best_w};
    }
  }
  throw InvariantError("unhandled set system kind");
}

FeasibleSet SetSystem::greedy_weight_feasible(const WeightVector& w,
                                              const ElementSet& s) const {
  check_in_ground(s);
  check_weights(w, s);
  ElementSet cur;
  for (ElementId e : by_weight_desc(w, s.ids())) {
    ElementSet grown = cur.with(e);
    if (is_feasible(grown)) cur = std::move(grown);
  }
  return {cur, total_weight(w, cur)};
}

FeasibleSet SetSystem::bipartite_matching(const WeightVector& w,
                                          const ElementSet& s) const {
  // Successive shortest paths on a unit-capacity network with cost -w.
  // Each augmentation yields a max-weight matching of the next cardinality;
  // stop once the best path no longer gains weight.
  const std::vector<int> color = two_coloring(graph_);
  const std::size_t n = graph_.vertices + 2;
  const std::size_t src = graph_.vertices;
  const std::size_t sink = graph_.vertices + 1;
  struct Arc {
    std::size_t to;
    int cap;
    double cost;
    long edge;  // element id for left->right arcs, else -1
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<std::size_t>> out(n);
  auto add_arc = [&](std::size_t a, std::size_t b, double cost, long edge) {
    out[a].push_back(arcs.size());
    arcs.push_back({b, 1, cost, edge});
    out[b].push_back(arcs.size());
    arcs.push_back({a, 0, -cost, -1});
  };
  std::vector<char> touched(graph_.vertices, 0);
  for (ElementId e : s) {
    if (!(w[e] > 0.0)) continue;
    auto [u, v] = graph_.edges[e];
    if (color[u] != 0) std::swap(u, v);
    add_arc(u, v, -w[e], static_cast<long>(e));
    touched[u] = touched[v] = 1;
  }
  for (std::size_t v = 0; v < graph_.vertices; ++v) {
    if (!touched[v]) continue;
    if (color[v] == 0) {
      add_arc(src, v, 0.0, -1);
    } else {
      add_arc(v, sink, 0.0, -1);
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> dist(n, inf);
    std::vector<long> via(n, -1);
    std::vector<char> queued(n, 0);
    std::deque<std::size_t> queue{src};
    dist[src] = 0.0;
    queued[src] = 1;
    while (!queue.empty()) {
      std::size_t a = queue.front();
      queue.pop_front();
      queued[a] = 0;
      for (std::size_t id : out[a]) {
        const Arc& arc = arcs[id];
        if (arc.cap <= 0) continue;
        double nd = dist[a] + arc.cost;
        if (nd < dist[arc.to] - 1e-12) {
          dist[arc.to] = nd;
          via[arc.to] = static_cast<long>(id);
          if (!queued[arc.to]) {
            queued[arc.to] = 1;
            queue.push_back(arc.to);
          }
        }
      }
    }
    if (!(dist[sink] < -1e-12)) break;
    for (std::size_t v = sink; v != src;) {
      std::size_t id = static_cast<std::size_t>(via[v]);
      arcs[id].cap -= 1;
      arcs[id ^ 1].cap += 1;
      v = arcs[id ^ 1].to;
    }
  }

  std::vector<ElementId> picked;
  for (const Arc& arc : arcs) {
    if (arc.edge >= 0 && arc.cap == 0) {
      picked.push_back(static_cast<ElementId>(arc.edge));
    }
  }
  ElementSet m(std::move(picked));
  return {m, total_weight(w, m)};
}

FeasibleSet SetSystem::search_matching(const WeightVector& w,
                                       const ElementSet& s) const {
  // Parallel edges: only the heaviest copy (lowest id on ties) can matter.
  std::map<std::pair<std::size_t, std::size_t>, ElementId> best_copy;
  for (ElementId e : s) {
    if (!(w[e] > 0.0)) continue;
    auto [u, v] = graph_.edges[e];
    if (u > v) std::swap(u, v);
    auto [it, fresh] = best_copy.try_emplace({u, v}, e);
    if (!fresh && w[e] > w[it->second]) it->second = e;
  }
  std::vector<ElementId> cand;
  for (const auto& [key, e] : best_copy) cand.push_back(e);
  if (cand.size() > kExactSearchLimit) {
    throw SizeLimitError("exact matching search limited to " +
                         std::to_string(kExactSearchLimit) + " edges, got " +
                         std::to_string(cand.size()));
  }
  std::sort(cand.begin(), cand.end());
  cand = by_weight_desc(w, std::move(cand));
  std::vector<char> used(graph_.vertices, 0);
  ElementSet best = branch_and_bound(
      cand, w,
      [&](const std::vector<ElementId>&, ElementId e) {
        const auto& [u, v] = graph_.edges[e];
        return !used[u] && !used[v];
      },
      [&](ElementId e) {
        const auto& [u, v] = graph_.edges[e];
        used[u] = used[v] = 1;
      },
      [&](ElementId e) {
        const auto& [u, v] = graph_.edges[e];
        used[u] = used[v] = 0;
      });
  return {best, total_weight(w, best)};
}

FeasibleSet SetSystem::search_intersection(const WeightVector& w,
                                           const ElementSet& s) const {
  std::vector<ElementId> cand;
  for (ElementId e : s) {
    if (w[e] > 0.0) cand.push_back(e);
  }
  if (cand.size() > kExactSearchLimit) {
    throw SizeLimitError("exact intersection search limited to " +
                         std::to_string(kExactSearchLimit) + " elements, got " +
                         std::to_string(cand.size()));
  }
  cand = by_weight_desc(w, std::move(cand));
  ElementSet best = branch_and_bound(
      cand, w,
      [&](const std::vector<ElementId>& cur, ElementId e) {
        std::vector<ElementId> ids = cur;
        ids.push_back(e);
        ElementSet grown(std::move(ids));
        return std::all_of(matroids_.begin(), matroids_.end(),
                           [&](const MatroidOracle& m) {
                             return m.is_independent(grown);
                           });
      },
      [](ElementId) {}, [](ElementId) {});
  return {best, total_weight(w, best)};
}

}  // namespace sposs
