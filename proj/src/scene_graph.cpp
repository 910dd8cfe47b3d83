#include "sg2caps/scene_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace sg2caps::graph {

double iou(const BBox& a, const BBox& b) {
  const double ix1 = std::max(a.x1, b.x1);
  const double iy1 = std::max(a.y1, b.y1);
  const double ix2 = std::min(a.x2, b.x2);
  const double iy2 = std::min(a.y2, b.y2);
  const double iw = std::max(0.0, ix2 - ix1);
  const double ih = std::max(0.0, iy2 - iy1);
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::string to_string(GraphSource s) {
  switch (s) {
    case GraphSource::pseudolabel: return "pseudolabel";
    case GraphSource::hoi: return "hoi";
    case GraphSource::union_: return "union";
    case GraphSource::tsg: return "tsg";
  }
  return "pseudolabel";
}

GraphSource graph_source_from_string(const std::string& s) {
  if (s == "pseudolabel") return GraphSource::pseudolabel;
  if (s == "hoi") return GraphSource::hoi;
  if (s == "union") return GraphSource::union_;
  if (s == "tsg") return GraphSource::tsg;
  throw ValidationError("unknown graph source '" + s + "'");
}

const ObjectNode* SceneGraph::find_node(int id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

ObjectNode* SceneGraph::find_node(int id) {
  for (auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ValidationReport validate(const SceneGraph& g) {
  ValidationReport report;
  auto fail = [&](const std::string& msg) { report.violations.push_back(msg); };

  std::unordered_set<int> ids;
  for (const auto& node : g.nodes) {
    if (!ids.insert(node.id).second)
      fail("duplicate node id " + std::to_string(node.id));
    if (node.label.empty()) fail("node " + std::to_string(node.id) + " has empty label");
    if (node.confidence < 0.0 || node.confidence > 1.0)
      fail("node " + std::to_string(node.id) + " confidence " + fmt(node.confidence) +
           " outside [0,1]");
    if (node.box) {
      const BBox& b = *node.box;
      if (!(b.x1 < b.x2) || !(b.y1 < b.y2))
        fail("node " + std::to_string(node.id) + " has degenerate box");
      if (b.x1 < 0 || b.y1 < 0 || b.x2 > g.width || b.y2 > g.height)
        fail("node " + std::to_string(node.id) + " box out of bounds");
    }
    for (const auto& attr : node.attributes) {
      if (attr.confidence < 0.0 || attr.confidence > 1.0)
        fail("node " + std::to_string(node.id) + " attribute '" + attr.label +
             "' confidence outside [0,1]");
    }
  }

  std::set<std::tuple<int, std::string, int>> triples;
  for (const auto& edge : g.edges) {
    if (edge.subject_id == edge.object_id)
      fail("self-loop on node " + std::to_string(edge.subject_id));
    for (int endpoint : {edge.subject_id, edge.object_id}) {
      if (!ids.count(endpoint)) fail("dangling endpoint " + std::to_string(endpoint));
    }
    if (edge.confidence < 0.0 || edge.confidence > 1.0)
      fail("edge (" + std::to_string(edge.subject_id) + "," + edge.predicate + "," +
           std::to_string(edge.object_id) + ") confidence outside [0,1]");
    if (!triples.insert({edge.subject_id, edge.predicate, edge.object_id}).second)
      fail("duplicate triple (" + std::to_string(edge.subject_id) + "," + edge.predicate +
           "," + std::to_string(edge.object_id) + ")");
  }
  return report;
}

namespace {

void require_node(const SceneGraph& g, int node_id) {
  if (!g.has_node(node_id))
    throw ValidationError("unknown node id " + std::to_string(node_id));
}

}  // namespace

std::vector<std::size_t> out_edge_indices(const SceneGraph& g, int node_id) {
  require_node(g, node_id);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].subject_id == node_id) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = g.edges[a];
    const auto& eb = g.edges[b];
    return std::tie(ea.object_id, ea.predicate) < std::tie(eb.object_id, eb.predicate);
  });
  return idx;
}

std::vector<std::size_t> in_edge_indices(const SceneGraph& g, int node_id) {
  require_node(g, node_id);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].object_id == node_id) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = g.edges[a];
    const auto& eb = g.edges[b];
    return std::tie(ea.subject_id, ea.predicate) < std::tie(eb.subject_id, eb.predicate);
  });
  return idx;
}

std::vector<int> sbj_set(const SceneGraph& g, int node_id) {
  std::vector<int> out;
  for (std::size_t i : out_edge_indices(g, node_id)) out.push_back(g.edges[i].object_id);
  return out;
}

std::vector<int> obj_set(const SceneGraph& g, int node_id) {
  std::vector<int> out;
  for (std::size_t i : in_edge_indices(g, node_id)) out.push_back(g.edges[i].subject_id);
  return out;
}

std::size_t relation_degree(const SceneGraph& g, int node_id) {
  return sbj_set(g, node_id).size() + obj_set(g, node_id).size();
}

namespace {

void merge_attributes(std::vector<AttributeEntry>& into,
                      const std::vector<AttributeEntry>& from) {
  for (const auto& attr : from) {
    auto it = std::find_if(into.begin(), into.end(),
                           [&](const AttributeEntry& a) { return a.label == attr.label; });
    if (it == into.end())
      into.push_back(attr);
    else
      it->confidence = std::max(it->confidence, attr.confidence);
  }
}

}  // namespace

SceneGraph union_graphs(const SceneGraph& pl, const SceneGraph& hoi_graph) {
  if (pl.image_id != hoi_graph.image_id)
    throw ValidationError("union over mismatched image ids '" + pl.image_id + "' vs '" +
                          hoi_graph.image_id + "'");
  if (pl.width != hoi_graph.width || pl.height != hoi_graph.height)
    throw ValidationError("union over mismatched image dimensions for '" + pl.image_id +
                          "'");

  SceneGraph out;
  out.image_id = pl.image_id;
  out.width = pl.width;
  out.height = pl.height;
  out.source = GraphSource::union_;

  // Left nodes seed the output with dense ids.
  std::unordered_map<int, int> left_map, right_map;
  for (const auto& node : pl.nodes) {
    ObjectNode copy = node;
    copy.id = static_cast<int>(out.nodes.size());
    left_map[node.id] = copy.id;
    out.nodes.push_back(std::move(copy));
  }

  // Right nodes merge into the best same-label overlap (IoU >= 0.5, highest
  // IoU first, lower id on ties) or append as new nodes.
  for (const auto& node : hoi_graph.nodes) {
    int best = -1;
    double best_iou = 0.0;
    if (node.box) {
      for (const auto& candidate : out.nodes) {
        if (candidate.label != node.label || !candidate.box) continue;
        const double overlap = iou(*candidate.box, *node.box);
        if (overlap >= 0.5 && overlap > best_iou) {
          best = candidate.id;
          best_iou = overlap;
        }
      }
    }
    if (best >= 0) {
      ObjectNode& target = *out.find_node(best);
      if (node.confidence > target.confidence) {
        target.confidence = node.confidence;
        target.box = node.box;
      }
      merge_attributes(target.attributes, node.attributes);
      right_map[node.id] = best;
    } else {
      ObjectNode copy = node;
      copy.id = static_cast<int>(out.nodes.size());
      right_map[node.id] = copy.id;
      out.nodes.push_back(std::move(copy));
    }
  }

  // Edge union with (s,p,o) dedup keeping max confidence.
  std::map<std::tuple<int, std::string, int>, double> triples;
  auto add_edges = [&](const SceneGraph& g, const std::unordered_map<int, int>& id_map) {
    for (const auto& edge : g.edges) {
      const int s = id_map.at(edge.subject_id);
      const int o = id_map.at(edge.object_id);
      if (s == o) continue;  // endpoints merged into one node
      auto key = std::make_tuple(s, edge.predicate, o);
      auto it = triples.find(key);
      if (it == triples.end())
        triples.emplace(key, edge.confidence);
      else
        it->second = std::max(it->second, edge.confidence);
    }
  };
  add_edges(pl, left_map);
  add_edges(hoi_graph, right_map);

  for (const auto& [key, confidence] : triples) {
    out.edges.push_back(
        {std::get<0>(key), std::get<2>(key), std::get<1>(key), confidence});
  }
  std::sort(out.edges.begin(), out.edges.end(), [](const RelationEdge& a, const RelationEdge& b) {
    return std::tie(a.subject_id, a.object_id, a.predicate) <
           std::tie(b.subject_id, b.object_id, b.predicate);
  });
  return out;
}

}  // namespace sg2caps::graph
