#pragma once

#include <optional>
#include <vector>

#include "sg2caps/rng.hpp"
#include "sg2caps/scene_graph.hpp"
#include "sg2caps/tape.hpp"

namespace sg2caps::encoder {

constexpr std::size_t kGlobalFeatureDim = 256;

struct EncoderConfig {
  std::size_t d = 128;          // embedding and output width
  bool use_box = true;          // box embeddings contribute to the node sum
  bool attend_relations = false;  // standalone relation vectors join the attended set
  bool use_summary = false;     // global-feature summary node is appended
};

// One fully connected layer followed by a ReLU; the five graph-convolution
// functions share this structure with independent parameters.
struct FcRelu {
  nn::Parameter w;  // [d, in]
  nn::Parameter b;  // [d]

  void init(const std::string& name, std::size_t in, std::size_t out, Rng& rng);
  nn::Var apply(nn::Tape& tape, nn::Var x);
};

struct EncoderParams {
  EncoderConfig cfg;
  nn::Parameter obj_table;   // [|vocab|, d]
  nn::Parameter attr_table;  // [|vocab|, d]
  nn::Parameter rel_table;   // [|vocab|, d]
  nn::Parameter box_w;       // [d, 5]
  nn::Parameter box_b;       // [d]
  FcRelu g_r, g_a, g_b, g_s, g_o;
  FcRelu summary_proj;       // [d, 256], allocated only when use_summary

  void init(std::size_t vocab_size, const EncoderConfig& config, Rng& rng);
  std::vector<nn::Parameter*> parameters();
  std::size_t parameter_count() const;
};

enum class NodeRole { object, relation, summary };

// Attention targets for the decoder: one fused vector per object node, plus
// optional relation vectors and an optional summary vector.
struct EncodedGraph {
  std::vector<nn::Var> vectors;
  std::vector<NodeRole> roles;
  std::vector<int> object_node_ids;  // graph node id per object-role vector
  std::size_t dim = 0;

  bool empty() const { return vectors.empty(); }
};

// x_r = g_r(e_oi, e_rij, e_oj).
nn::Var rel_embedding(nn::Tape& tape, nn::Var e_subject, nn::Var e_predicate,
                      nn::Var e_object, EncoderParams& params);

// Mean over attributes of g_a(e_oi, e_ail); zero vector when the node has no
// attributes.
nn::Var attr_embedding(nn::Tape& tape, const graph::ObjectNode& node, nn::Var e_node,
                       EncoderParams& params, const graph::Vocabulary& vocab);

// g_b over the node embedding and the projected normalized box feature
// (x1/W, y1/H, x2/W, y2/H, area/(W*H)); zero vector for boxless nodes.
nn::Var box_embedding(nn::Tape& tape, const graph::SceneGraph& g,
                      const graph::ObjectNode& node, nn::Var e_node,
                      EncoderParams& params);

// Role-aware mean over the node's triplets: g_s where the node acts as
// subject, g_o where it acts as object; zero vector for isolated nodes.
nn::Var obj_embedding(nn::Tape& tape, const graph::SceneGraph& g, int node_id,
                      EncoderParams& params, const graph::Vocabulary& vocab);

// Full encoder: f_i = x_o + x_b + x_a per object node, optional relation
// vectors, optional ReLU(summary_proj(global_feature)) appended last.
EncodedGraph encode(nn::Tape& tape, const graph::SceneGraph& g, EncoderParams& params,
                    const graph::Vocabulary& vocab,
                    const std::optional<std::vector<double>>& global_feature);

}  // namespace sg2caps::encoder
