#pragma once

#include <filesystem>
#include <string>

#include "sg2caps/scene_graph.hpp"

namespace sg2caps::graph {

// Strict SceneGraph JSON: field order irrelevant, unknown fields rejected.
// Schema:
//   {"image_id": str, "width": num, "height": num, "source": str,
//    "nodes": [{"id": int, "label": str, "confidence": num,
//               "box": [x1,y1,x2,y2] | null,
//               "attributes": [{"label": str, "confidence": num}]}],
//    "edges": [{"subject": int, "predicate": str, "object": int,
//               "confidence": num}]}
SceneGraph scene_graph_from_json(const std::string& text, const std::string& origin = "");
std::string scene_graph_to_json(const SceneGraph& g);

SceneGraph load_scene_graph(const std::filesystem::path& path);
void save_scene_graph(const SceneGraph& g, const std::filesystem::path& path);

}  // namespace sg2caps::graph
