#include "sg2caps/tape.hpp"

#include <algorithm>
#include <cmath>

namespace sg2caps::nn {

namespace {

void check_finite(const Tensor& t, const char* op) {
  if (!t.all_finite())
    throw NumericError(std::string("non-finite intermediate in ") + op);
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b))
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " +
                     b.shape_str());
}

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Tape::Node& Tape::node(Var v) {
  if (!v.valid() || static_cast<std::size_t>(v.id) >= nodes_.size())
    throw NumericError("invalid tape handle");
  return nodes_[static_cast<std::size_t>(v.id)];
}

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || static_cast<std::size_t>(v.id) >= nodes_.size())
    throw NumericError("invalid tape handle");
  return nodes_[static_cast<std::size_t>(v.id)];
}

void Tape::check_rank1(Var v, const char* op) const {
  if (node(v).value.rank() != 1)
    throw ShapeError(std::string(op) + ": expected rank-1 tensor, got shape " +
                     node(v).value.shape_str());
}

Var Tape::push(Tensor value, std::function<void(Tape&, Var)> back) {
  Node n;
  n.value = std::move(value);
  n.grad = Tensor::zeros(n.value.shape);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::constant(Tensor value) {
  check_finite(value, "constant");
  return push(std::move(value), nullptr);
}

Var Tape::param(Parameter& p) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) return Var{it->second};
  check_finite(p.value, "param");
  Var v = push(p.value, nullptr);
  node(v).bound = &p;
  param_nodes_.emplace(&p, v.id);
  return v;
}

Var Tape::add(Var a, Var b) {
  const Tensor& ta = value(a);
  const Tensor& tb = value(b);
  check_same_shape(ta, tb, "add");
  Tensor out = ta;
  for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] += tb.data[i];
  check_finite(out, "add");
  return push(std::move(out), [a, b](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    Tensor& ga = t.grad_mut(a);
    Tensor& gb = t.grad_mut(b);
    for (std::size_t i = 0; i < g.numel(); ++i) {
      ga.data[i] += g.data[i];
      gb.data[i] += g.data[i];
    }
  });
}

Var Tape::mul(Var a, Var b) {
  const Tensor& ta = value(a);
  const Tensor& tb = value(b);
  check_same_shape(ta, tb, "mul");
  Tensor out = ta;
  for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] *= tb.data[i];
  check_finite(out, "mul");
  return push(std::move(out), [a, b](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    const Tensor& va = t.value(a);
    const Tensor& vb = t.value(b);
    Tensor& ga = t.grad_mut(a);
    Tensor& gb = t.grad_mut(b);
    for (std::size_t i = 0; i < g.numel(); ++i) {
      ga.data[i] += g.data[i] * vb.data[i];
      gb.data[i] += g.data[i] * va.data[i];
    }
  });
}

Var Tape::scale(Var x, double c) {
  Tensor out = value(x);
  for (double& v : out.data) v *= c;
  check_finite(out, "scale");
  return push(std::move(out), [x, c](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    Tensor& gx = t.grad_mut(x);
    for (std::size_t i = 0; i < g.numel(); ++i) gx.data[i] += c * g.data[i];
  });
}

Var Tape::smul(Var scalar, Var x) {
  if (value(scalar).numel() != 1)
    throw ShapeError("smul: scalar operand has shape " + value(scalar).shape_str());
  const double s = value(scalar).data[0];
  Tensor out = value(x);
  for (double& v : out.data) v *= s;
  check_finite(out, "smul");
  return push(std::move(out), [scalar, x](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    const Tensor& vx = t.value(x);
    const double sv = t.value(scalar).data[0];
    Tensor& gs = t.grad_mut(scalar);
    Tensor& gx = t.grad_mut(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.numel(); ++i) {
      acc += g.data[i] * vx.data[i];
      gx.data[i] += sv * g.data[i];
    }
    gs.data[0] += acc;
  });
}

Var Tape::matvec(Var w, Var x) {
  const Tensor& tw = value(w);
  const Tensor& tx = value(x);
  if (tw.rank() != 2 || tx.rank() != 1 || tw.dim(1) != tx.dim(0))
    throw ShapeError("matvec: shape mismatch " + tw.shape_str() + " vs " + tx.shape_str());
  const std::size_t m = tw.dim(0), n = tw.dim(1);
  Tensor out = Tensor::zeros({m});
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    const double* row = tw.data.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * tx.data[j];
    out.data[i] = acc;
  }
  check_finite(out, "matvec");
  return push(std::move(out), [w, x, m, n](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    const Tensor& vw = t.value(w);
    const Tensor& vx = t.value(x);
    Tensor& gw = t.grad_mut(w);
    Tensor& gx = t.grad_mut(x);
    for (std::size_t i = 0; i < m; ++i) {
      const double gi = g.data[i];
      double* grow = gw.data.data() + i * n;
      const double* wrow = vw.data.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        grow[j] += gi * vx.data[j];
        gx.data[j] += wrow[j] * gi;
      }
    }
  });
}

Var Tape::relu(Var x) {
  Tensor out = value(x);
  for (double v : out.data) relu_margin_ = std::min(relu_margin_, std::abs(v));
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return push(std::move(out), [x](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    const Tensor& vx = t.value(x);
    Tensor& gx = t.grad_mut(x);
    for (std::size_t i = 0; i < g.numel(); ++i)
      if (vx.data[i] > 0.0) gx.data[i] += g.data[i];
  });
}

Var Tape::tanh_(Var x) {
  Tensor out = value(x);
  for (double& v : out.data) v = std::tanh(v);
  return push(std::move(out), [x](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    const Tensor& vy = t.value(self);
    Tensor& gx = t.grad_mut(x);
    for (std::size_t i = 0; i < g.numel(); ++i)
      gx.data[i] += g.data[i] * (1.0 - vy.data[i] * vy.data[i]);
  });
}

Var Tape::sigmoid(Var x) {
  Tensor out = value(x);
  for (double& v : out.data) v = stable_sigmoid(v);
  return push(std::move(out), [x](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    const Tensor& vy = t.value(self);
    Tensor& gx = t.grad_mut(x);
    for (std::size_t i = 0; i < g.numel(); ++i)
      gx.data[i] += g.data[i] * vy.data[i] * (1.0 - vy.data[i]);
  });
}

Var Tape::softmax(Var x, int axis) {
  check_rank1(x, "softmax");
  if (axis != 0) throw ShapeError("softmax: only axis 0 of rank-1 tensors is supported");
  const Tensor& tx = value(x);
  Tensor out = tx;
  const double m = *std::max_element(tx.data.begin(), tx.data.end());
  double z = 0.0;
  for (double& v : out.data) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : out.data) v /= z;
  check_finite(out, "softmax");
  return push(std::move(out), [x](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    const Tensor& s = t.value(self);
    Tensor& gx = t.grad_mut(x);
    double gdots = 0.0;
    for (std::size_t i = 0; i < g.numel(); ++i) gdots += g.data[i] * s.data[i];
    for (std::size_t i = 0; i < g.numel(); ++i)
      gx.data[i] += s.data[i] * (g.data[i] - gdots);
  });
}

Var Tape::concat(const std::vector<Var>& xs, int axis) {
  if (axis != 0) throw ShapeError("concat: only axis 0 of rank-1 tensors is supported");
  if (xs.empty()) throw ShapeError("concat: empty input list");
  std::size_t total = 0;
  for (Var v : xs) {
    check_rank1(v, "concat");
    total += value(v).numel();
  }
  Tensor out = Tensor::zeros({total});
  std::size_t offset = 0;
  for (Var v : xs) {
    const Tensor& tv = value(v);
    std::copy(tv.data.begin(), tv.data.end(), out.data.begin() + offset);
    offset += tv.numel();
  }
  return push(std::move(out), [xs](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    std::size_t offset = 0;
    for (Var v : xs) {
      Tensor& gv = t.grad_mut(v);
      for (std::size_t i = 0; i < gv.numel(); ++i) gv.data[i] += g.data[offset + i];
      offset += gv.numel();
    }
  });
}

Var Tape::add_n(const std::vector<Var>& xs) {
  if (xs.empty()) throw ShapeError("add_n: empty input list");
  Tensor out = value(xs[0]);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const Tensor& tv = value(xs[k]);
    check_same_shape(out, tv, "add_n");
    for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] += tv.data[i];
  }
  check_finite(out, "add_n");
  return push(std::move(out), [xs](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    for (Var v : xs) {
      Tensor& gv = t.grad_mut(v);
      for (std::size_t i = 0; i < g.numel(); ++i) gv.data[i] += g.data[i];
    }
  });
}

Var Tape::mean(const std::vector<Var>& xs) {
  if (xs.empty()) throw ShapeError("mean: empty input list");
  return scale(add_n(xs), 1.0 / static_cast<double>(xs.size()));
}

Var Tape::slice(Var x, std::size_t begin, std::size_t end) {
  check_rank1(x, "slice");
  const Tensor& tx = value(x);
  if (begin >= end || end > tx.numel())
    throw ShapeError("slice: range [" + std::to_string(begin) + "," + std::to_string(end) +
                     ") out of bounds for shape " + tx.shape_str());
  Tensor out = Tensor::zeros({end - begin});
  std::copy(tx.data.begin() + begin, tx.data.begin() + end, out.data.begin());
  return push(std::move(out), [x, begin](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    Tensor& gx = t.grad_mut(x);
    for (std::size_t i = 0; i < g.numel(); ++i) gx.data[begin + i] += g.data[i];
  });
}

Var Tape::dot(Var a, Var b) {
  check_rank1(a, "dot");
  check_rank1(b, "dot");
  const Tensor& ta = value(a);
  const Tensor& tb = value(b);
  check_same_shape(ta, tb, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < ta.numel(); ++i) acc += ta.data[i] * tb.data[i];
  Tensor out = Tensor::scalar(acc);
  check_finite(out, "dot");
  return push(std::move(out), [a, b](Tape& t, Var self) {
    const double g = t.grad(self).data[0];
    const Tensor& va = t.value(a);
    const Tensor& vb = t.value(b);
    Tensor& ga = t.grad_mut(a);
    Tensor& gb = t.grad_mut(b);
    for (std::size_t i = 0; i < va.numel(); ++i) {
      ga.data[i] += g * vb.data[i];
      gb.data[i] += g * va.data[i];
    }
  });
}

Var Tape::embedding_lookup(Var table, std::size_t row) {
  const Tensor& tt = value(table);
  if (tt.rank() != 2)
    throw ShapeError("embedding_lookup: table must be rank 2, got " + tt.shape_str());
  if (row >= tt.dim(0))
    throw ShapeError("embedding_lookup: row " + std::to_string(row) +
                     " out of range for table " + tt.shape_str());
  const std::size_t d = tt.dim(1);
  Tensor out = Tensor::zeros({d});
  std::copy(tt.data.begin() + row * d, tt.data.begin() + (row + 1) * d, out.data.begin());
  return push(std::move(out), [table, row, d](Tape& t, Var self) {
    const Tensor& g = t.grad(self);
    Tensor& gt = t.grad_mut(table);
    for (std::size_t i = 0; i < d; ++i) gt.data[row * d + i] += g.data[i];
  });
}

Var Tape::cross_entropy(Var logits, std::size_t target) {
  check_rank1(logits, "cross_entropy");
  const Tensor& tl = value(logits);
  if (target >= tl.numel())
    throw ShapeError("cross_entropy: target " + std::to_string(target) +
                     " out of range for logits " + tl.shape_str());
  const double m = *std::max_element(tl.data.begin(), tl.data.end());
  double z = 0.0;
  for (double v : tl.data) z += std::exp(v - m);
  const double lse = m + std::log(z);
  Tensor out = Tensor::scalar(lse - tl.data[target]);
  check_finite(out, "cross_entropy");
  return push(std::move(out), [logits, target, m, z](Tape& t, Var self) {
    const double g = t.grad(self).data[0];
    const Tensor& vl = t.value(logits);
    Tensor& gl = t.grad_mut(logits);
    for (std::size_t i = 0; i < vl.numel(); ++i) {
      const double s = std::exp(vl.data[i] - m) / z;
      gl.data[i] += g * (s - (i == target ? 1.0 : 0.0));
    }
  });
}

std::pair<Var, Var> Tape::lstm_cell(Var x, Var h, Var c, const LstmVars& p) {
  const std::size_t hid = p.hidden;
  if (value(h).numel() != hid || value(c).numel() != hid)
    throw ShapeError("lstm_cell: state size mismatch");
  Var gates = add(add(matvec(p.w_x, x), matvec(p.w_h, h)), p.b);
  Var in_gate = sigmoid(slice(gates, 0, hid));
  Var forget_gate = sigmoid(slice(gates, hid, 2 * hid));
  Var cell_cand = tanh_(slice(gates, 2 * hid, 3 * hid));
  Var out_gate = sigmoid(slice(gates, 3 * hid, 4 * hid));
  Var c_next = add(mul(forget_gate, c), mul(in_gate, cell_cand));
  Var h_next = mul(out_gate, tanh_(c_next));
  return {h_next, c_next};
}

void Tape::backward(Var loss) {
  if (swept_) throw NumericError("backward called twice on one tape");
  swept_ = true;
  if (value(loss).numel() != 1)
    throw ShapeError("backward: loss must be scalar, got " + value(loss).shape_str());
  grad_mut(loss).data[0] = 1.0;
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.back) n.back(*this, Var{i});
    if (n.bound) {
      Tensor& pg = n.bound->grad;
      for (std::size_t k = 0; k < pg.numel(); ++k) pg.data[k] += n.grad.data[k];
    }
  }
}

}  // namespace sg2caps::nn
