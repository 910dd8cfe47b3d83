#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sg2caps/scene_graph.hpp"

namespace sg2caps::hoi {

constexpr const char* kPersonLabel = "person";
constexpr const char* kAndPredicate = "and";

struct Detection {
  std::string label;
  double confidence = 0.0;
  graph::BBox box;
};

// One agent-action(-target)(-instrument) inference; the agent is always a
// person detection.
struct HoiInference {
  std::size_t agent = 0;
  std::string action;
  std::optional<std::size_t> target;
  std::optional<std::size_t> instrument;
};

// Actions that become relation edges vs. actions that become attributes on
// the agent (stand -> standing).
struct VerbTables {
  std::set<std::string> relation_verbs;
  std::map<std::string, std::string> attribute_verbs;

  void check() const;  // disjoint verb sets
};

// Shipped defaults: 10 relation verbs, 16 attribute verbs.
VerbTables default_verb_tables();
VerbTables verb_tables_from_json(const std::string& text, const std::string& origin = "");

// All detections plus any inferences for one image.
struct HoiInput {
  std::string image_id;
  double width = 0, height = 0;
  std::vector<Detection> detections;
  std::vector<HoiInference> inferences;
};

HoiInput hoi_input_from_json(const std::string& text, const std::string& origin = "");

// True iff some detection is a person with confidence >= 0.5.
bool human_gate(const std::vector<Detection>& detections);

// Builds the partial scene graph: every detection becomes a node (label
// mapped into the caption vocabulary, exact duplicates merged), targeted
// actions become edges, object-less attribute verbs become agent attributes,
// instruments stay as plain nodes.
graph::SceneGraph build_hoi_graph(const HoiInput& input, const VerbTables& verbs,
                                  const graph::Vocabulary& caption_vocab);

// Adds a single (a, and, b) edge between the two most confident nodes when
// the graph has no edges and no attributes; otherwise returns it unchanged.
graph::SceneGraph and_fallback(const graph::SceneGraph& g);

// The edge-insertion core of and_fallback, without the attribute gate; used
// when an edgeless pseudolabel graph stands in for a missing HOI graph.
graph::SceneGraph add_and_edge(const graph::SceneGraph& g);

}  // namespace sg2caps::hoi
