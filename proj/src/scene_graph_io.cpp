#include "sg2caps/scene_graph_io.hpp"

#include <set>

#include "json.hpp"
#include "sg2caps/util.hpp"

namespace sg2caps::graph {

using nlohmann::json;

namespace {

void reject_unknown_fields(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ValidationError("unknown field '" + it.key() + "' in " + where);
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError("missing field '" + key + "' in " + where);
  return *it;
}

}  // namespace

SceneGraph scene_graph_from_json(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError((origin.empty() ? std::string("scene graph JSON") : origin) +
                          ": parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
  }
  const std::string where = origin.empty() ? "scene graph" : origin;
  if (!root.is_object()) throw ValidationError(where + ": top level must be an object");
  reject_unknown_fields(root, {"image_id", "width", "height", "source", "nodes", "edges"},
                        where);

  SceneGraph g;
  g.image_id = require(root, "image_id", where).get<std::string>();
  g.width = require(root, "width", where).get<double>();
  g.height = require(root, "height", where).get<double>();
  g.source = graph_source_from_string(require(root, "source", where).get<std::string>());

  for (const auto& jn : require(root, "nodes", where)) {
    const std::string node_where = where + " node";
    reject_unknown_fields(jn, {"id", "label", "confidence", "box", "attributes"},
                          node_where);
    ObjectNode node;
    node.id = require(jn, "id", node_where).get<int>();
    node.label = require(jn, "label", node_where).get<std::string>();
    node.confidence = require(jn, "confidence", node_where).get<double>();
    const json& jbox = require(jn, "box", node_where);
    if (!jbox.is_null()) {
      if (!jbox.is_array() || jbox.size() != 4)
        throw ValidationError(node_where + ": box must be [x1,y1,x2,y2] or null");
      node.box = BBox{jbox[0].get<double>(), jbox[1].get<double>(), jbox[2].get<double>(),
                      jbox[3].get<double>(), g.width, g.height};
    }
    for (const auto& ja : require(jn, "attributes", node_where)) {
      reject_unknown_fields(ja, {"label", "confidence"}, node_where + " attribute");
      node.attributes.push_back({require(ja, "label", node_where).get<std::string>(),
                                 require(ja, "confidence", node_where).get<double>()});
    }
    g.nodes.push_back(std::move(node));
  }

  for (const auto& je : require(root, "edges", where)) {
    const std::string edge_where = where + " edge";
    reject_unknown_fields(je, {"subject", "predicate", "object", "confidence"}, edge_where);
    RelationEdge edge;
    edge.subject_id = require(je, "subject", edge_where).get<int>();
    edge.predicate = require(je, "predicate", edge_where).get<std::string>();
    edge.object_id = require(je, "object", edge_where).get<int>();
    edge.confidence = require(je, "confidence", edge_where).get<double>();
    g.edges.push_back(std::move(edge));
  }
  return g;
}

std::string scene_graph_to_json(const SceneGraph& g) {
  json root;
  root["image_id"] = g.image_id;
  root["width"] = g.width;
  root["height"] = g.height;
  root["source"] = to_string(g.source);
  root["nodes"] = json::array();
  for (const auto& node : g.nodes) {
    json jn;
    jn["id"] = node.id;
    jn["label"] = node.label;
    jn["confidence"] = node.confidence;
    if (node.box) {
      jn["box"] = {node.box->x1, node.box->y1, node.box->x2, node.box->y2};
    } else {
      jn["box"] = nullptr;
    }
    jn["attributes"] = json::array();
    for (const auto& attr : node.attributes)
      jn["attributes"].push_back({{"label", attr.label}, {"confidence", attr.confidence}});
    root["nodes"].push_back(std::move(jn));
  }
  root["edges"] = json::array();
  for (const auto& edge : g.edges) {
    root["edges"].push_back({{"subject", edge.subject_id},
                             {"predicate", edge.predicate},
                             {"object", edge.object_id},
                             {"confidence", edge.confidence}});
  }
  return root.dump(2) + "\n";
}

SceneGraph load_scene_graph(const std::filesystem::path& path) {
  return scene_graph_from_json(read_file(path), path.string());
}

void save_scene_graph(const SceneGraph& g, const std::filesystem::path& path) {
  atomic_write_file(path, scene_graph_to_json(g));
}

}  // namespace sg2caps::graph
