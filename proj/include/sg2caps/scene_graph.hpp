#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sg2caps/vocab.hpp"

namespace sg2caps::graph {

// Pixel-space box, corner convention x1 < x2, y1 < y2.
struct BBox {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  double image_w = 0, image_h = 0;

  double area() const { return (x2 - x1) * (y2 - y1); }
  double center_x() const { return 0.5 * (x1 + x2); }
  double center_y() const { return 0.5 * (y1 + y2); }
  bool operator==(const BBox& o) const {
    return x1 == o.x1 && y1 == o.y1 && x2 == o.x2 && y2 == o.y2;
  }
};

// Intersection over union; 0 for disjoint boxes.
double iou(const BBox& a, const BBox& b);

struct AttributeEntry {
  std::string label;
  double confidence = 1.0;
};

struct ObjectNode {
  int id = 0;
  std::string label;
  double confidence = 1.0;
  std::optional<BBox> box;
  std::vector<AttributeEntry> attributes;
};

struct RelationEdge {
  int subject_id = 0;
  int object_id = 0;
  std::string predicate;
  double confidence = 1.0;
};

enum class GraphSource { pseudolabel, hoi, union_, tsg };

std::string to_string(GraphSource s);
GraphSource graph_source_from_string(const std::string& s);

// Grounded multigraph of object nodes and directed relation edges; the
// currency every stage of the pipeline consumes and produces.
struct SceneGraph {
  std::string image_id;
  double width = 0, height = 0;
  std::vector<ObjectNode> nodes;
  std::vector<RelationEdge> edges;
  GraphSource source = GraphSource::pseudolabel;

  const ObjectNode* find_node(int id) const;
  ObjectNode* find_node(int id);
  bool has_node(int id) const { return find_node(id) != nullptr; }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every SceneGraph invariant; violations are data, not failures.
ValidationReport validate(const SceneGraph& g);

// Node ids j with an edge (i, r, j), respectively k with an edge (k, r, i);
// multiplicity preserved, sorted by (neighbor id, predicate).
std::vector<int> sbj_set(const SceneGraph& g, int node_id);
std::vector<int> obj_set(const SceneGraph& g, int node_id);

// Indices into g.edges, same order as sbj_set / obj_set.
std::vector<std::size_t> out_edge_indices(const SceneGraph& g, int node_id);
std::vector<std::size_t> in_edge_indices(const SceneGraph& g, int node_id);

// Number of relationship triplets involving the node.
std::size_t relation_degree(const SceneGraph& g, int node_id);

// Merges two graphs over the same image. Nodes with equal label and box
// IoU >= 0.5 collapse into one (max confidence wins, attributes and incident
// edges are unioned); ids are reassigned densely and duplicate (s,p,o)
// triples keep the highest confidence.
SceneGraph union_graphs(const SceneGraph& pl, const SceneGraph& hoi_graph);

}  // namespace sg2caps::graph
