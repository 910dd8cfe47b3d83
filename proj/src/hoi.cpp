#include "sg2caps/hoi.hpp"

#include <algorithm>

#include "json.hpp"

namespace sg2caps::hoi {

using graph::SceneGraph;
using nlohmann::json;

void VerbTables::check() const {
  for (const auto& [verb, attr] : attribute_verbs) {
    if (relation_verbs.count(verb))
      throw ValidationError("verb '" + verb + "' appears in both verb tables");
  }
}

VerbTables default_verb_tables() {
  VerbTables t;
  t.relation_verbs = {"hold", "ride", "hit",   "eat",  "carry",
                      "throw", "catch", "cut", "kick", "drink"};
  t.attribute_verbs = {
      {"stand", "standing"},   {"sit", "sitting"},         {"walk", "walking"},
      {"run", "running"},      {"jump", "jumping"},        {"lay", "laying"},
      {"smile", "smiling"},    {"look", "looking"},        {"talk", "talking"},
      {"work", "working"},     {"ski", "skiing"},          {"surf", "surfing"},
      {"skateboard", "skateboarding"}, {"snowboard", "snowboarding"},
      {"point", "pointing"},   {"read", "reading"}};
  t.check();
  return t;
}

VerbTables verb_tables_from_json(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError((origin.empty() ? std::string("verb tables") : origin) +
                          ": parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
  }
  VerbTables t;
  for (const auto& v : root.at("relation_verbs")) t.relation_verbs.insert(v.get<std::string>());
  for (auto it = root.at("attribute_verbs").begin(); it != root.at("attribute_verbs").end();
       ++it)
    t.attribute_verbs[it.key()] = it.value().get<std::string>();
  t.check();
  return t;
}

HoiInput hoi_input_from_json(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError((origin.empty() ? std::string("HOI input") : origin) +
                          ": parse error at byte " + std::to_string(e.byte) + ": " +
                          e.what());
  }
  HoiInput input;
  input.image_id = root.at("image_id").get<std::string>();
  input.width = root.at("width").get<double>();
  input.height = root.at("height").get<double>();
  for (const auto& jd : root.at("detections")) {
    Detection det;
    det.label = jd.at("label").get<std::string>();
    det.confidence = jd.at("confidence").get<double>();
    const auto& jbox = jd.at("box");
    if (!jbox.is_array() || jbox.size() != 4)
      throw ValidationError("detection box must be [x1,y1,x2,y2]");
    det.box = graph::BBox{jbox[0].get<double>(), jbox[1].get<double>(),
                          jbox[2].get<double>(), jbox[3].get<double>(), input.width,
                          input.height};
    input.detections.push_back(std::move(det));
  }
  if (root.contains("hoi")) {
    for (const auto& jh : root.at("hoi")) {
      HoiInference inf;
      inf.agent = jh.at("agent").get<std::size_t>();
      inf.action = jh.at("action").get<std::string>();
      if (jh.contains("target") && !jh.at("target").is_null())
        inf.target = jh.at("target").get<std::size_t>();
      if (jh.contains("instrument") && !jh.at("instrument").is_null())
        inf.instrument = jh.at("instrument").get<std::size_t>();
      if (inf.agent >= input.detections.size() ||
          (inf.target && *inf.target >= input.detections.size()) ||
          (inf.instrument && *inf.instrument >= input.detections.size()))
        throw ValidationError("HOI inference references a detection out of range");
      input.inferences.push_back(std::move(inf));
    }
  }
  return input;
}

bool human_gate(const std::vector<Detection>& detections) {
  return std::any_of(detections.begin(), detections.end(), [](const Detection& d) {
    return d.label == kPersonLabel && d.confidence >= 0.5;
  });
}

SceneGraph build_hoi_graph(const HoiInput& input, const VerbTables& verbs,
                           const graph::Vocabulary& caption_vocab) {
  verbs.check();
  if (!input.inferences.empty() && !human_gate(input.detections))
    throw ValidationError("image '" + input.image_id +
                          "' has HOI inferences but no confident person detection");

  SceneGraph g;
  g.image_id = input.image_id;
  g.width = input.width;
  g.height = input.height;
  g.source = graph::GraphSource::hoi;

  // Detection index -> node id; exact duplicates (same label, same box)
  // collapse into one node.
  std::vector<int> node_of(input.detections.size(), -1);
  for (std::size_t i = 0; i < input.detections.size(); ++i) {
    const Detection& det = input.detections[i];
    const std::string label = map_to_caption_vocab(det.label, caption_vocab);
    int found = -1;
    for (std::size_t j = 0; j < i; ++j) {
      const Detection& prev = input.detections[j];
      if (prev.label == det.label && prev.box == det.box) {
        found = node_of[j];
        break;
      }
    }
    if (found >= 0) {
      node_of[i] = found;
      graph::ObjectNode& node = *g.find_node(found);
      node.confidence = std::max(node.confidence, det.confidence);
      continue;
    }
    graph::ObjectNode node;
    node.id = static_cast<int>(g.nodes.size());
    node.label = label;
    node.confidence = det.confidence;
    node.box = det.box;
    node_of[i] = node.id;
    g.nodes.push_back(std::move(node));
  }

  for (const auto& inf : input.inferences) {
    if (input.detections[inf.agent].label != kPersonLabel)
      throw ValidationError("HOI agent must be a person detection");
    const bool is_relation = verbs.relation_verbs.count(inf.action) > 0;
    const auto attr_it = verbs.attribute_verbs.find(inf.action);
    if (!is_relation && attr_it == verbs.attribute_verbs.end())
      throw ValidationError("unknown HOI action '" + inf.action + "'");

    if (inf.target && is_relation) {
      const int s = node_of[inf.agent];
      const int o = node_of[*inf.target];
      if (s == o) continue;
      const bool duplicate =
          std::any_of(g.edges.begin(), g.edges.end(), [&](const graph::RelationEdge& e) {
            return e.subject_id == s && e.object_id == o && e.predicate == inf.action;
          });
      if (!duplicate) g.edges.push_back({s, o, inf.action, 1.0});
    } else if (attr_it != verbs.attribute_verbs.end()) {
      graph::ObjectNode& agent = *g.find_node(node_of[inf.agent]);
      const std::string& attr = attr_it->second;
      const bool present =
          std::any_of(agent.attributes.begin(), agent.attributes.end(),
                      [&](const graph::AttributeEntry& a) { return a.label == attr; });
      if (!present) agent.attributes.push_back({attr, 1.0});
    }
    // A relation verb without a target contributes nothing beyond its nodes.
  }
  return g;
}

SceneGraph add_and_edge(const SceneGraph& g) {
  if (g.nodes.size() < 2) return g;
  // Top two nodes by confidence, ties to the lower id.
  std::vector<const graph::ObjectNode*> order;
  for (const auto& node : g.nodes) order.push_back(&node);
  std::sort(order.begin(), order.end(),
            [](const graph::ObjectNode* a, const graph::ObjectNode* b) {
              if (a->confidence != b->confidence) return a->confidence > b->confidence;
              return a->id < b->id;
            });
  SceneGraph out = g;
  out.edges.push_back({order[0]->id, order[1]->id, kAndPredicate, 1.0});
  return out;
}

SceneGraph and_fallback(const SceneGraph& g) {
  if (!g.edges.empty()) return g;
  for (const auto& node : g.nodes)
    if (!node.attributes.empty()) return g;
  return add_and_edge(g);
}

}  // namespace sg2caps::hoi
