#include "sg2caps/pipeline.hpp"

#include <algorithm>
#include <unordered_set>

namespace sg2caps::pipeline {

using graph::SceneGraph;

void PipelineConfig::check() const {
  for (double v : {obj_conf_min, nms_iou, rel_conf_min, attr_conf_min}) {
    if (v < 0.0 || v > 1.0)
      throw ValidationError("pipeline threshold outside [0,1]");
  }
}

namespace {

SceneGraph keep_nodes(const SceneGraph& g, const std::unordered_set<int>& keep) {
  SceneGraph out = g;
  out.nodes.clear();
  out.edges.clear();
  for (const auto& node : g.nodes)
    if (keep.count(node.id)) out.nodes.push_back(node);
  for (const auto& edge : g.edges)
    if (keep.count(edge.subject_id) && keep.count(edge.object_id))
      out.edges.push_back(edge);
  return out;
}

}  // namespace

SceneGraph filter_objects(const SceneGraph& g, const PipelineConfig& cfg) {
  std::unordered_set<int> keep;
  for (const auto& node : g.nodes)
    if (node.confidence >= cfg.obj_conf_min) keep.insert(node.id);
  return keep_nodes(g, keep);
}

SceneGraph nms(const SceneGraph& g, const PipelineConfig& cfg) {
  std::vector<const graph::ObjectNode*> order;
  order.reserve(g.nodes.size());
  for (const auto& node : g.nodes) {
    if (!node.box)
      throw ValidationError("nms requires boxes; node " + std::to_string(node.id) +
                            " has none");
    order.push_back(&node);
  }
  std::sort(order.begin(), order.end(),
            [](const graph::ObjectNode* a, const graph::ObjectNode* b) {
              if (a->confidence != b->confidence) return a->confidence > b->confidence;
              return a->id < b->id;
            });

  std::vector<const graph::ObjectNode*> kept;
  std::unordered_set<int> keep;
  for (const graph::ObjectNode* candidate : order) {
    bool suppressed = false;
    for (const graph::ObjectNode* winner : kept) {
      if (cfg.class_aware_nms && winner->label != candidate->label) continue;
      if (graph::iou(*winner->box, *candidate->box) > cfg.nms_iou) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) {
      kept.push_back(candidate);
      keep.insert(candidate->id);
    }
  }
  return keep_nodes(g, keep);
}

SceneGraph filter_relations(const SceneGraph& g, const PipelineConfig& cfg) {
  SceneGraph out = g;
  out.edges.clear();
  for (const auto& edge : g.edges)
    if (edge.confidence >= cfg.rel_conf_min) out.edges.push_back(edge);
  return out;
}

SceneGraph prune_attributes(const SceneGraph& g, const PipelineConfig& cfg) {
  SceneGraph out = g;
  for (auto& node : out.nodes) {
    const graph::AttributeEntry* best = nullptr;
    for (const auto& attr : node.attributes) {
      if (!best || attr.confidence > best->confidence ||
          (attr.confidence == best->confidence && attr.label < best->label))
        best = &attr;
    }
    if (best && best->confidence >= cfg.attr_conf_min)
      node.attributes = {*best};
    else
      node.attributes.clear();
  }
  return out;
}

SceneGraph process(const SceneGraph& g, const PipelineConfig& cfg) {
  cfg.check();
  return prune_attributes(filter_relations(nms(filter_objects(g, cfg), cfg), cfg), cfg);
}

}  // namespace sg2caps::pipeline
