#pragma once

#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sg2caps/tensor.hpp"

namespace sg2caps::nn {

// Handle into a Tape node.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// LSTM weights as tape vars; gate order along the 4H axis is
// (input, forget, cell, output).
struct LstmVars {
  Var w_x;  // [4H, in]
  Var w_h;  // [4H, H]
  Var b;    // [4H]
  std::size_t hidden = 0;
};

// Reverse-mode tape. Ops append nodes in topological order; backward() walks
// the nodes in reverse and accumulates into every reachable Parameter's grad.
// Every op validates shapes and rejects non-finite outputs. A tape is built
// per forward pass and discarded.
class Tape {
 public:
  Var constant(Tensor value);
  Var constant_vec(std::vector<double> data) { return constant(Tensor::vec(std::move(data))); }
  Var scalar(double v) { return constant(Tensor::scalar(v)); }
  Var zeros(std::vector<std::size_t> shape) { return constant(Tensor::zeros(std::move(shape))); }

  // Leaf bound to a Parameter; one node per parameter per tape.
  Var param(Parameter& p);

  Var add(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var x, double c);
  Var smul(Var scalar, Var x);  // {1} times any shape
  Var matvec(Var w, Var x);     // [m,n]*[n] -> [m]
  Var linear(Var x, Var w, Var b) { return add(matvec(w, x), b); }
  Var relu(Var x);
  Var tanh_(Var x);
  Var sigmoid(Var x);
  Var softmax(Var x, int axis = 0);  // rank-1 only
  Var concat(const std::vector<Var>& xs, int axis = 0);
  Var add_n(const std::vector<Var>& xs);
  Var mean(const std::vector<Var>& xs);
  Var slice(Var x, std::size_t begin, std::size_t end);  // rank-1
  Var dot(Var a, Var b);                                 // -> {1}
  Var embedding_lookup(Var table, std::size_t row);      // [V,d] -> {d}
  Var cross_entropy(Var logits, std::size_t target);     // -> {1}
  std::pair<Var, Var> lstm_cell(Var x, Var h, Var c, const LstmVars& p);

  const Tensor& value(Var v) const { return node(v).value; }
  const Tensor& grad(Var v) const { return node(v).grad; }

  // Seeds d(loss)/d(loss) = 1 and sweeps the tape backwards.
  void backward(Var loss);

  // Smallest |preactivation| seen by any relu on this tape; finite-difference
  // checks resample when this is too close to the kink.
  double relu_kink_margin() const { return relu_margin_; }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void(Tape&, Var self)> back;
    Parameter* bound = nullptr;
  };

  Var push(Tensor value, std::function<void(Tape&, Var)> back);
  Node& node(Var v);
  const Node& node(Var v) const;
  Tensor& grad_mut(Var v) { return node(v).grad; }
  void check_rank1(Var v, const char* op) const;

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
  double relu_margin_ = 1e300;
  bool swept_ = false;
};

}  // namespace sg2caps::nn
