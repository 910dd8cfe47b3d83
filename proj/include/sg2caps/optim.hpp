#pragma once

#include <functional>
#include <vector>

#include "sg2caps/rng.hpp"
#include "sg2caps/tensor.hpp"

namespace sg2caps::nn {

// Uniform(-a, a) with a = 1 / sqrt(fan_in).
void init_uniform(Parameter& p, std::size_t fan_in, Rng& rng);

// Standard Adam with bias correction; step() consumes and zeroes the
// accumulated gradients.
class Adam {
 public:
  explicit Adam(std::vector<Parameter*> params, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8);
  void step(double lr);

 private:
  std::vector<Parameter*> params_;
  std::vector<Tensor> m_, v_;
  double beta1_, beta2_, eps_;
  long t_ = 0;
};

// Plain SGD alternative; also zeroes gradients after the update.
class Sgd {
 public:
  explicit Sgd(std::vector<Parameter*> params) : params_(std::move(params)) {}
  void step(double lr);

 private:
  std::vector<Parameter*> params_;
};

// Scalar loss over the current parameter values. with_grad selects whether to
// run the backward sweep (the numeric probes skip it).
using LossFn = std::function<double(bool with_grad)>;

// Compares analytic gradients against central differences entrywise and
// returns the maximum relative error |a - n| / max(1e-8, |a| + |n|).
double grad_check(const LossFn& loss, const std::vector<Parameter*>& params,
                  double eps = 1e-5);

}  // namespace sg2caps::nn
