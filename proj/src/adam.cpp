#include "banditsum/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace banditsum::model {

AdamState AdamState::for_params(const ParamVector& params, const AdamConfig& config) {
  const auto n = static_cast<Eigen::Index>(params.size());
  return AdamState{config, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), 0};
}

void adam_step(ParamVector& params, const GradVector& objective_grad, AdamState& state) {
  const auto n = static_cast<Eigen::Index>(params.size());
  if (objective_grad.values.size() != n || state.m.size() != n || state.v.size() != n) {
    throw std::invalid_argument("adam_step: parameter, gradient and moment sizes differ");
  }
  if (!objective_grad.values.allFinite()) {
    throw std::invalid_argument("adam_step: non-finite gradient entry");
  }
  const AdamConfig& c = state.config;
  Eigen::VectorXd& theta = params.values();

  Eigen::VectorXd g = -objective_grad.values + c.weight_decay * theta;
  for (const auto& seg : params.segments()) {
    if (!seg.trainable) {
      g.segment(static_cast<Eigen::Index>(seg.offset), static_cast<Eigen::Index>(seg.length)).setZero();
    }
  }
  if (c.clip_norm > 0.0) {
    const double norm = g.norm();
    if (norm > c.clip_norm) g *= c.clip_norm / norm;
  }

  ++state.t;
  state.m = c.beta1 * state.m + (1.0 - c.beta1) * g;
  state.v = c.beta2 * state.v + (1.0 - c.beta2) * g.cwiseAbs2();
  const double m_scale = 1.0 / (1.0 - std::pow(c.beta1, static_cast<double>(state.t)));
  const double v_scale = 1.0 / (1.0 - std::pow(c.beta2, static_cast<double>(state.t)));
  theta.array() -= c.lr * (state.m.array() * m_scale) /
                   ((state.v.array() * v_scale).sqrt() + c.eps_stab);
}

}  // namespace banditsum::model
