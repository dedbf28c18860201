#include "sposs/certificates.hpp"

#include <cmath>

#include "sposs/error.hpp"

namespace sposs {

namespace {

const char* action_name(ExchangeStep::Action a) {
  switch (a) {
    case ExchangeStep::Action::kAdd: return "add";
    case ExchangeStep::Action::kDrop: return "drop";
    case ExchangeStep::Action::kSwap: return "swap";
  }
  return "unknown";
}

nlohmann::json ids_json(const ElementSet& s) { return s.ids(); }

ElementSet ids_from(const nlohmann::json& j) {
  return ElementSet(j.get<std::vector<ElementId>>());
}

bool is_matching(const ElementSet& s, const Graph& g) {
  std::vector<char> used(g.vertices, 0);
  for (ElementId e : s) {
    if (e >= g.edges.size()) return false;
    const auto& [u, v] = g.edges[e];
    if (u == v || used[u] || used[v]) return false;
    used[u] = used[v] = 1;
  }
  return true;
}

}  // namespace

nlohmann::json ExchangeTrace::to_json() const {
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& st : steps) {
    nlohmann::json j = {{"element", st.element},
                        {"action", action_name(st.action)},
                        {"active", st.active}};
    if (st.partner) j["partner"] = *st.partner;
    steps_json.push_back(std::move(j));
  }
  return {{"s1", ids_json(s1)}, {"s2", ids_json(s2)}, {"steps", steps_json}};
}

ExchangeTrace ExchangeTrace::from_json(const nlohmann::json& j) {
  try {
    ExchangeTrace tr;
    tr.s1 = ids_from(j.at("s1"));
    tr.s2 = ids_from(j.at("s2"));
    for (const auto& sj : j.at("steps")) {
      ExchangeStep st;
      st.element = sj.at("element").get<ElementId>();
      st.active = sj.at("active").get<bool>();
      const std::string a = sj.at("action").get<std::string>();
      if (a == "add") {
        st.action = ExchangeStep::Action::kAdd;
      } else if (a == "drop") {
        st.action = ExchangeStep::Action::kDrop;
      } else if (a == "swap") {
        st.action = ExchangeStep::Action::kSwap;
        st.partner = sj.at("partner").get<ElementId>();
      } else {
        throw ParseError("unknown trace action '" + a + "'");
      }
      tr.steps.push_back(st);
    }
    return tr;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed exchange trace: ") + ex.what());
  }
}

ElementSet ExchangeTrace::replay() const {
  ElementSet a = s1;
  ElementSet b = s2;
  for (const auto& st : steps) {
    switch (st.action) {
      case ExchangeStep::Action::kAdd:
        b.insert(st.element);
        break;
      case ExchangeStep::Action::kDrop:
        a.erase(st.element);
        break;
      case ExchangeStep::Action::kSwap:
        if (st.active) {
          b.erase(*st.partner);
          b.insert(st.element);
        } else {
          a.erase(st.element);
          a.insert(*st.partner);
        }
        break;
    }
  }
  return b;
}

ExchangeResult construct_t(const MatroidOracle& m, const ElementSet& s1,
                           const ElementSet& s2, const ElementSet& r) {
  if (!m.is_independent(s1) || !m.is_independent(s2)) {
    throw PreconditionError("construct_t needs independent S1 and S2");
  }
  ExchangeResult out;
  out.trace.s1 = s1;
  out.trace.s2 = s2;
  ElementSet a = s1;
  ElementSet b = s2;
  for (ElementId e : set_difference(s1, s2)) {
    ExchangeStep st;
    st.element = e;
    st.active = r.contains(e);
    if (m.is_independent(b.with(e))) {
      st.action = st.active ? ExchangeStep::Action::kAdd
                            : ExchangeStep::Action::kDrop;
      if (st.active) {
        b.insert(e);
      } else {
        a.erase(e);
      }
    } else {
      const ElementId f = m.find_exchange_pair(a, b, e);
      st.action = ExchangeStep::Action::kSwap;
      st.partner = f;
      if (st.active) {
        b.erase(f);
        b.insert(e);
      } else {
        a.erase(e);
        a.insert(f);
      }
    }
    out.trace.steps.push_back(st);
  }
  out.t = std::move(b);

  const ElementSet& t = out.t;
  if (!m.is_independent(t)) {
    throw InvariantError("construct_t produced a dependent set");
  }
  if (!set_intersection(s1, s2).is_subset_of(t)) {
    throw InvariantError("construct_t lost an element of S1 ∩ S2");
  }
  if (!set_intersection(set_difference(s1, s2), r).is_subset_of(t)) {
    throw InvariantError("construct_t lost an active element of S1∖S2");
  }
  if (!t.is_subset_of(set_union(set_intersection(s1, r), s2))) {
    throw InvariantError("construct_t output leaves (S1 ∩ R) ∪ S2");
  }
  return out;
}

ElementSet construct_i(const std::vector<MatroidOracle>& matroids,
                       const std::vector<ElementSet>& samples,
                       const ElementSet& r) {
  if (matroids.empty()) {
    throw PreconditionError("construct_i needs at least one matroid");
  }
  auto feasible = [&](const ElementSet& s) {
    for (const auto& m : matroids) {
      if (!m.is_independent(s)) return false;
    }
    return true;
  };
  for (const auto& q : samples) {
    if (!feasible(q)) {
      throw PreconditionError("construct_i sample " + q.to_string() +
                              " is not feasible in every matroid");
    }
  }
  std::vector<ElementSet> q = samples;
  ElementSet current;
  for (std::size_t t = 0; t < q.size(); ++t) {
    current = set_intersection(q[t], r);
    for (std::size_t i = t + 1; i < q.size(); ++i) {
      ElementSet next = construct_t(matroids.front(), q[t], q[i], r).t;
      for (std::size_t l = 1; l < matroids.size(); ++l) {
        next = set_intersection(next, construct_t(matroids[l], q[t], q[i], r).t);
      }
      if (!feasible(next)) {
        throw InvariantError("construct_i update left the intersection");
      }
      q[i] = std::move(next);
    }
  }
  if (!feasible(current)) {
    throw InvariantError("construct_i output is infeasible");
  }
  return current;
}

double crucial_threshold(double p, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidArgumentError("eps must lie in (0,1)");
  }
  return eps * eps * eps * p / (20.0 * std::log(1.0 / eps));
}

CrucialSplit classify_crucial(const Marginals& q, double p, double eps) {
  CrucialSplit out;
  out.threshold = crucial_threshold(p, eps);
  std::vector<ElementId> c, nc;
  for (std::size_t e = 0; e < q.q.size(); ++e) {
    (q.q[e] >= out.threshold ? c : nc)
        .push_back(static_cast<ElementId>(e));
  }
  out.crucial = ElementSet(std::move(c));
  out.non_crucial = ElementSet(std::move(nc));
  return out;
}

ElementSet augment_matching(const ElementSet& m_crs, const ElementSet& m_nc,
                            const Graph& g) {
  if (!is_matching(m_crs, g) || !is_matching(m_nc, g)) {
    throw PreconditionError("augment_matching inputs must be matchings");
  }
  std::vector<char> used(g.vertices, 0);
  for (ElementId e : m_crs) {
    used[g.edges[e].first] = used[g.edges[e].second] = 1;
  }
  ElementSet out = m_crs;
  for (ElementId e : m_nc) {
    const auto& [u, v] = g.edges[e];
    if (used[u] || used[v]) continue;
    used[u] = used[v] = 1;
    out.insert(e);
  }
  return out;
}

double copy_activation_probability(double split_p, double copies) {
  return 1.0 - std::pow(1.0 - split_p, copies);
}

SplitInstance split_edges(const SppInstance& inst, double eps) {
  if (inst.system.kind() != SetSystem::Kind::kMatching) {
    throw KindError("split_edges needs a matching system");
  }
  if (!inst.objective.is_additive()) {
    throw KindError("split_edges needs an additive objective");
  }
  if (!(inst.p > 0.0 && inst.p < 1.0)) {
    throw PreconditionError("split_edges needs p in (0,1)");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw PreconditionError("split_edges needs eps in (0,1)");
  }
  const double split_p = std::pow(eps, 4) * inst.p;
  const double c = std::log(1.0 / (1.0 - inst.p)) /
                   std::log(1.0 / (1.0 - split_p));
  const std::size_t copies =
      static_cast<std::size_t>(std::max(1.0, std::ceil(c - 1e-9)));

  const Graph& g = inst.system.graph();
  const WeightVector& w = inst.objective.weights();
  Graph split_graph;
  split_graph.vertices = g.vertices;
  WeightVector split_w;
  std::vector<ElementId> origin;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    for (std::size_t j = 0; j < copies; ++j) {
      split_graph.edges.push_back(g.edges[e]);
      split_w.push_back(w[e]);
      origin.push_back(static_cast<ElementId>(e));
    }
  }
  SppInstance split(inst.name + "_split",
                    SetSystem::matching(std::move(split_graph)),
                    Objective::additive(std::move(split_w)), split_p,
                    inst.seed);
  split.metadata = {{"split_from", inst.name},
                    {"eps", eps},
                    {"copies", copies},
                    {"copies_exact", c}};
  return SplitInstance{std::move(split), std::move(origin), c, copies, split_p};
}

ElementSet pull_back(const SplitInstance& split, const ElementSet& q_split) {
  std::vector<ElementId> out;
  for (ElementId e : q_split) {
    if (e >= split.origin.size()) {
      throw DomainError("pull_back: element outside the split instance");
    }
    out.push_back(split.origin[e]);
  }
  return ElementSet(std::move(out));
}

bool is_nss(const MatroidOracle& m, const std::vector<ElementSet>& rounds) {
  MatroidOracle view = m;
  for (const auto& round : rounds) {
    if (!round.is_subset_of(view.ground())) return false;
    if (!view.is_independent(round)) return false;
    if (view.rank(round) != view.rank()) return false;
    view = view.deleted(round);
  }
  return true;
}

HybridWitness hybrid_witness(const SppInstance& inst, const CrucialSplit& split,
                             const ElementSet& crs_part,
                             const ElementSet& greedy_part, const ElementSet& r,
                             const CrsScheme& crs, const std::vector<double>& x,
                             Rng& rng) {
  if (inst.system.kind() != SetSystem::Kind::kMatching) {
    throw KindError("hybrid_witness needs a matching system");
  }
  const WeightVector& w = inst.objective.weights();
  HybridWitness out;
  ElementSet crs_active =
      set_intersection(set_intersection(crs_part, r), split.crucial);
  out.m_crs = crs.resolve(x, crs_active, rng);
  ElementSet nc_active =
      set_intersection(set_intersection(greedy_part, r), split.non_crucial);
  out.m_nc = inst.system.max_weight_feasible(w, nc_active).elements;
  out.m_aug = augment_matching(out.m_crs, out.m_nc, inst.system.graph());
  out.weight_crs = total_weight(w, out.m_crs);
  out.weight_aug = total_weight(w, out.m_aug);
  return out;
}

}  // namespace sposs
