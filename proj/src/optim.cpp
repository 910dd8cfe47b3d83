#include "sg2caps/optim.hpp"

#include <cmath>

namespace sg2caps::nn {

void init_uniform(Parameter& p, std::size_t fan_in, Rng& rng) {
  const double a = 1.0 / std::sqrt(static_cast<double>(fan_in > 0 ? fan_in : 1));
  for (double& v : p.value.data) v = rng.uniform(-a, a);
}

Adam::Adam(std::vector<Parameter*> params, double beta1, double beta2, double eps)
    : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (Parameter* p : params_) {
    m_.push_back(Tensor::zeros(p->value.shape));
    v_.push_back(Tensor::zeros(p->value.shape));
  }
}

void Adam::step(double lr) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Parameter& p = *params_[k];
    for (std::size_t i = 0; i < p.value.numel(); ++i) {
      const double g = p.grad.data[i];
      m_[k].data[i] = beta1_ * m_[k].data[i] + (1.0 - beta1_) * g;
      v_[k].data[i] = beta2_ * v_[k].data[i] + (1.0 - beta2_) * g * g;
      const double mhat = m_[k].data[i] / bc1;
      const double vhat = v_[k].data[i] / bc2;
      p.value.data[i] -= lr * mhat / (std::sqrt(vhat) + eps_);
    }
    if (!p.value.all_finite())
      throw NumericError("non-finite parameter '" + p.name + "' after Adam step");
    p.zero_grad();
  }
}

void Sgd::step(double lr) {
  for (Parameter* p : params_) {
    for (std::size_t i = 0; i < p->value.numel(); ++i)
      p->value.data[i] -= lr * p->grad.data[i];
    p->zero_grad();
  }
}

double grad_check(const LossFn& loss, const std::vector<Parameter*>& params, double eps) {
  for (Parameter* p : params) p->zero_grad();
  loss(true);
  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) {
    analytic.push_back(p->grad);
    p->zero_grad();
  }

  double max_rel = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    for (std::size_t i = 0; i < p.value.numel(); ++i) {
      const double saved = p.value.data[i];
      p.value.data[i] = saved + eps;
      const double f_plus = loss(false);
      p.value.data[i] = saved - eps;
      const double f_minus = loss(false);
      p.value.data[i] = saved;
      const double numeric = (f_plus - f_minus) / (2.0 * eps);
      const double a = analytic[k].data[i];
      const double rel = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

}  // namespace sg2caps::nn
