#pragma once

#include "sg2caps/scene_graph.hpp"

namespace sg2caps::pipeline {

// Cleanup thresholds for raw generator output. Boundary semantics: nodes and
// edges are dropped strictly below their thresholds, attributes are kept at
// confidence >= attr_conf_min.
struct PipelineConfig {
  double obj_conf_min = 0.25;
  double nms_iou = 0.30;
  double rel_conf_min = 0.30;
  double attr_conf_min = 0.90;
  bool class_aware_nms = true;

  void check() const;
};

// Drops nodes with confidence < obj_conf_min along with their incident edges.
graph::SceneGraph filter_objects(const graph::SceneGraph& g, const PipelineConfig& cfg);

// Greedy per-class NMS: sort by confidence (ties to the lower node id), keep
// a node unless it overlaps an already kept node above nms_iou. Every node
// must carry a box.
graph::SceneGraph nms(const graph::SceneGraph& g, const PipelineConfig& cfg);

// Drops edges with confidence < rel_conf_min.
graph::SceneGraph filter_relations(const graph::SceneGraph& g, const PipelineConfig& cfg);

// Keeps at most the single best attribute per node and only if its
// confidence reaches attr_conf_min; argmax ties go to the lexicographically
// smallest label.
graph::SceneGraph prune_attributes(const graph::SceneGraph& g, const PipelineConfig& cfg);

// filter_objects -> nms -> filter_relations -> prune_attributes.
graph::SceneGraph process(const graph::SceneGraph& g, const PipelineConfig& cfg);

}  // namespace sg2caps::pipeline
