#ifndef BANDITSUM_ADAM_HPP
#define BANDITSUM_ADAM_HPP

#include <Eigen/Core>

#include <cstdint>

#include "banditsum/params.hpp"

namespace banditsum::model {

struct AdamConfig {
  double lr = 5e-5;
  double beta1 = 0.0;
  double beta2 = 0.999;
  double eps_stab = 1e-8;
  double weight_decay = 1e-6;
  /// Global-norm clipping threshold; <= 0 disables clipping.
  double clip_norm = 1.0;
};

struct AdamState {
  AdamConfig config;
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::uint64_t t = 0;

  static AdamState for_params(const ParamVector& params, const AdamConfig& config);
};

/// One Adam step that *ascends* the objective whose gradient is `objective_grad`:
/// the gradient is negated, the L2 term weight_decay * theta is added, the
/// result is clipped to global norm clip_norm, and a bias-corrected Adam
/// update is applied. Non-trainable segments are left untouched. Throws
/// std::invalid_argument on shape mismatch or non-finite gradient entries.
void adam_step(ParamVector& params, const GradVector& objective_grad, AdamState& state);

}  // namespace banditsum::model

#endif  // BANDITSUM_ADAM_HPP
