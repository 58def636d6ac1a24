#include "polyglue/json_io.hpp"

#include <json.hpp>

#include <stdexcept>

namespace polyglue {

using nlohmann::json;

namespace {

json permutation_to_json(const Permutation& perm) {
  json arr = json::array();
  for (const auto v : perm) arr.push_back(v + 1);
  return arr;
}

Permutation permutation_from_json(const json& arr) {
  Permutation perm;
  perm.reserve(arr.size());
  for (const auto& v : arr) {
    const auto label = v.get<std::uint64_t>();
    if (label < 1 || label > arr.size())
      throw std::invalid_argument("permutation entry out of range");
    perm.push_back(static_cast<Dart>(label - 1));
  }
  return perm;
}

json summary_to_json(const MapSummary& summary) {
  json comps = json::array();
  for (const auto& c : summary.components)
    comps.push_back({{"vertices", c.vertices},
                     {"faces", c.faces},
                     {"edges", c.edges},
                     {"genus", c.genus}});
  return json{{"components", comps},
              {"component_count", summary.component_count()},
              {"connected", summary.connected()},
              {"vertices", summary.vertices()},
              {"faces", summary.faces()},
              {"edges", summary.edges()},
              {"genus", summary.genus()}};
}

}  // namespace

std::string to_json(const LabeledMap& map) {
  const json j{{"n", map.n},
               {"alpha", permutation_to_json(map.alpha)},
               {"phi", permutation_to_json(map.phi)}};
  return j.dump();
}

LabeledMap labeled_map_from_json(const std::string& text) {
  const json j = json::parse(text);
  LabeledMap map;
  map.n = j.at("n").get<std::uint32_t>();
  map.alpha = permutation_from_json(j.at("alpha"));
  map.phi = permutation_from_json(j.at("phi"));
  if (map.alpha.size() != 2 * static_cast<std::size_t>(map.n) ||
      map.phi.size() != map.alpha.size())
    throw std::invalid_argument("labeled map: array sizes do not match n");
  return map;
}

std::string to_json(const MapSummary& summary) { return summary_to_json(summary).dump(); }

std::string to_json(const MultiGraph& graph) {
  json edges = json::array();
  for (const auto& [key, count] : graph.edges)
    edges.push_back({key.first + 1, key.second + 1, count});
  const json j{{"vertex_count", graph.vertex_count()},
               {"degrees", graph.degrees},
               {"edges", edges}};
  return j.dump();
}

std::string trajectory_csv(const TrajectoryLog& log, const MapSummary& summary) {
  std::string out = "step,kind,peeled,partner,pi,H,L,B,X,red_resampled\n";
  for (const auto& ev : log.events) {
    out += std::to_string(ev.step);
    out += ',';
    out += to_string(ev.kind);
    out += ',';
    out += std::to_string(ev.peeled + 1);
    out += ',';
    out += std::to_string(ev.partner + 1);
    out += ',';
    out += std::to_string(ev.peeled_perimeter);
    out += ',';
    out += std::to_string(ev.holes);
    out += ',';
    out += std::to_string(ev.loop_holes);
    out += ',';
    out += std::to_string(ev.bigon_holes);
    out += ',';
    out += std::to_string(ev.true_vertices);
    out += ',';
    out += ev.red_resampled ? '1' : '0';
    out += '\n';
  }
  out += to_json(summary);
  out += '\n';
  return out;
}

}  // namespace polyglue
