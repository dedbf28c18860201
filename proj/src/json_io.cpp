#include "sposs/json_io.hpp"

#include <fstream>
#include <sstream>

#include "sposs/adversarial.hpp"
#include "sposs/error.hpp"

namespace sposs {

using nlohmann::json;

namespace {

const json& at(const json& j, const char* key) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return *it;
}

std::size_t as_size(const json& v, const char* what) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) {
    return static_cast<std::size_t>(v.get<long long>());
  }
  throw ParseError(std::string("'") + what +
                   "' must be a nonnegative integer");
}

std::size_t size_field(const json& j, const char* key) {
  return as_size(at(j, key), key);
}

double number_field(const json& j, const char* key) {
  const json& v = at(j, key);
  if (!v.is_number()) {
    throw ParseError(std::string("'") + key + "' must be a number");
  }
  return v.get<double>();
}

std::string string_field(const json& j, const char* key) {
  const json& v = at(j, key);
  if (!v.is_string()) {
    throw ParseError(std::string("'") + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<std::size_t> size_list(const json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string("'") + what + "' must be an array");
  std::vector<std::size_t> out;
  for (const auto& x : v) out.push_back(as_size(x, what));
  return out;
}

std::vector<ElementId> id_list(const json& v, const char* what) {
  std::vector<ElementId> out;
  for (std::size_t x : size_list(v, what)) out.push_back(static_cast<ElementId>(x));
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> edge_list(const json& v) {
  if (!v.is_array()) throw ParseError("'edges' must be an array");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& e : v) {
    auto ends = size_list(e, "edges");
    if (ends.size() != 2) throw ParseError("each edge must be [u, v]");
    out.emplace_back(ends[0], ends[1]);
  }
  return out;
}

std::uint64_t seed_field(const json& j) {
  auto it = j.find("seed");
  if (it == j.end()) return 0;
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_number_integer() && it->get<long long>() >= 0) {
    return static_cast<std::uint64_t>(it->get<long long>());
  }
  throw ParseError("'seed' must be a nonnegative integer");
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& ex) {
    throw ParseError(ex.what());
  }
}

}  // namespace

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& ex) {
    throw ParseError(std::string("invalid JSON: ") + ex.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& ex) {
    throw ParseError("invalid JSON in '" + path + "': " + ex.what());
  }
}

MatroidOracle matroid_from_json(const json& j) {
  return guarded([&] {
    const std::string family = string_field(j, "family");
    if (family == "uniform") {
      return MatroidOracle::uniform(size_field(j, "n"), size_field(j, "r"));
    }
    if (family == "partition") {
      const json& blocks_json = at(j, "blocks");
      if (!blocks_json.is_array()) throw ParseError("'blocks' must be an array");
      std::vector<std::vector<ElementId>> blocks;
      for (const auto& b : blocks_json) blocks.push_back(id_list(b, "blocks"));
      return MatroidOracle::partition(std::move(blocks),
                                      size_list(at(j, "caps"), "caps"));
    }
    if (family == "graphic") {
      return MatroidOracle::graphic(size_field(j, "vertices"),
                                    edge_list(at(j, "edges")));
    }
    if (family == "explicit") {
      const json& ind = at(j, "independent");
      if (!ind.is_array()) throw ParseError("'independent' must be an array");
      std::vector<ElementSet> sets;
      for (const auto& s : ind) sets.emplace_back(id_list(s, "independent"));
      return MatroidOracle::explicit_family(id_list(at(j, "ground"), "ground"),
                                            std::move(sets));
    }
    throw ParseError("unknown matroid family '" + family + "'");
  });
}

json matroid_to_json(const MatroidOracle& m) {
  if (!m.view_stack().empty()) {
    throw KindError("matroid views cannot be serialized");
  }
  return std::visit(
      [](const auto& fam) -> json {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, UniformFamily>) {
          return {{"family", "uniform"}, {"n", fam.n}, {"r", fam.r}};
        } else if constexpr (std::is_same_v<T, PartitionFamily>) {
          return {{"family", "partition"},
                  {"blocks", fam.blocks},
                  {"caps", fam.caps}};
        } else if constexpr (std::is_same_v<T, GraphicFamily>) {
          json edges = json::array();
          for (const auto& [u, v] : fam.edges) edges.push_back({u, v});
          return {{"family", "graphic"},
                  {"vertices", fam.vertices},
                  {"edges", edges}};
        } else {
          json ind = json::array();
          for (const auto& s : fam.independent) ind.push_back(s.ids());
          return {{"family", "explicit"},
                  {"ground", fam.ground},
                  {"independent", ind}};
        }
      },
      m.family());
}

SetSystem system_from_json(const json& j) {
  return guarded([&] {
    if (j.is_object() && j.contains("family")) {
      return SetSystem::single_matroid(matroid_from_json(j));
    }
    const std::string kind = string_field(j, "kind");
    if (kind == "matroid") {
      return SetSystem::single_matroid(matroid_from_json(at(j, "matroid")));
    }
    if (kind == "intersection") {
      const json& ms = at(j, "matroids");
      if (!ms.is_array()) throw ParseError("'matroids' must be an array");
      std::vector<MatroidOracle> list;
      for (const auto& m : ms) list.push_back(matroid_from_json(m));
      return SetSystem::intersection(std::move(list));
    }
    if (kind == "matching") {
      const json& g = at(j, "graph");
      Graph graph{size_field(g, "vertices"), edge_list(at(g, "edges"))};
      return SetSystem::matching(std::move(graph));
    }
    if (kind == "rank1") return SetSystem::rank1(size_field(j, "n"));
    if (kind == "blocks") {
      return SetSystem::blocks(size_field(j, "m"), size_field(j, "k"));
    }
    throw ParseError("unknown system kind '" + kind + "'");
  });
}

json system_to_json(const SetSystem& sys) {
  switch (sys.kind()) {
    case SetSystem::Kind::kSingleMatroid:
      return {{"kind", "matroid"},
              {"matroid", matroid_to_json(sys.matroids().front())}};
    case SetSystem::Kind::kIntersection: {
      json ms = json::array();
      for (const auto& m : sys.matroids()) ms.push_back(matroid_to_json(m));
      return {{"kind", "intersection"}, {"matroids", ms}};
    }
    case SetSystem::Kind::kMatching: {
      json edges = json::array();
      for (const auto& [u, v] : sys.graph().edges) edges.push_back({u, v});
      return {{"kind", "matching"},
              {"graph", {{"vertices", sys.graph().vertices}, {"edges", edges}}}};
    }
    case SetSystem::Kind::kRank1:
      return {{"kind", "rank1"}, {"n", sys.ground().size()}};
    case SetSystem::Kind::kBlocks:
      return {{"kind", "blocks"}, {"m", sys.block_count()}, {"k", sys.block_size()}};
  }
  throw InvariantError("unhandled system kind");
}

Objective objective_from_json(const json& j) {
  return guarded([&] {
    const std::string kind = string_field(j, "objective");
    if (kind == "additive") {
      const json& w = at(j, "w");
      if (!w.is_array()) throw ParseError("'w' must be an array");
      WeightVector weights;
      for (const auto& x : w) {
        if (!x.is_number()) throw ParseError("'w' entries must be numbers");
        weights.push_back(x.get<double>());
      }
      return Objective::additive(std::move(weights));
    }
    if (kind == "coverage") {
      const json& sets_json = at(j, "sets");
      if (!sets_json.is_array()) throw ParseError("'sets' must be an array");
      std::vector<std::vector<std::size_t>> sets;
      for (const auto& s : sets_json) sets.push_back(size_list(s, "sets"));
      bool normalized = j.value("normalized", false);
      return Objective::coverage(size_field(j, "universe"), std::move(sets),
                                 normalized);
    }
    if (kind == "equal_partition") {
      return Objective::equal_partition(size_field(j, "n"), size_field(j, "r"));
    }
    throw ParseError("unknown objective '" + kind + "'");
  });
}

json objective_to_json(const Objective& obj) {
  switch (obj.kind()) {
    case Objective::Kind::kAdditive:
      return {{"objective", "additive"}, {"w", obj.weights()}};
    case Objective::Kind::kCoverage:
      return {{"objective", "coverage"},
              {"universe", obj.universe()},
              {"sets", obj.sets()},
              {"normalized", obj.normalized()}};
    case Objective::Kind::kEqualPartition:
      return {{"objective", "equal_partition"},
              {"n", obj.partition_n()},
              {"r", obj.partition_r()}};
  }
  throw InvariantError("unhandled objective kind");
}

SppInstance instance_from_json(const json& j) {
  return guarded([&] {
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    const std::uint64_t seed = seed_field(j);
    if (j.contains("generator")) {
      const std::string gen = string_field(j, "generator");
      if (gen == "rank1") {
        Rank1Mode mode = parse_rank1_mode(j.value("mode", std::string("example31")));
        return rank1_hard_instance(size_field(j, "n"), mode, seed);
      }
      if (gen == "blocks") {
        return block_hard_instance(size_field(j, "m"), size_field(j, "k"), seed);
      }
      if (gen == "equal_partition") {
        return equal_partition_hard_instance(size_field(j, "n"), size_field(j, "r"),
                                             number_field(j, "p"), seed);
      }
      throw ParseError("unknown generator '" + gen + "'");
    }
    SppInstance inst(j.value("name", std::string("instance")),
                     system_from_json(at(j, "system")),
                     objective_from_json(at(j, "objective")),
                     number_field(j, "p"), seed);
    if (j.contains("metadata")) inst.metadata = j.at("metadata");
    return inst;
  });
}

json instance_to_json(const SppInstance& inst) {
  json j = {{"name", inst.name},
            {"p", inst.p},
            {"seed", inst.seed},
            {"system", system_to_json(inst.system)},
            {"objective", objective_to_json(inst.objective)}};
  if (!inst.metadata.empty()) j["metadata"] = inst.metadata;
  return j;
}

}  // namespace sposs
