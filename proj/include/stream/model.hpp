#ifndef STREAM_MODEL_HPP
#define STREAM_MODEL_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stream/errors.hpp"

namespace stream {

// The eight fitted models: fixed/random effects, optional monthly time
// dummies, optional GP time effect, optional variance modeling.
enum class ModelKind { FE, FE_M, FE_MV, RE, RE_M, RE_MV, RE_GP, STREAM };

inline bool uses_gp(ModelKind k) {
  return k == ModelKind::RE_GP || k == ModelKind::STREAM;
}
inline bool uses_monthly_dummies(ModelKind k) {
  return k == ModelKind::FE_M || k == ModelKind::FE_MV ||
         k == ModelKind::RE_M || k == ModelKind::RE_MV;
}
inline bool models_variance(ModelKind k) {
  return k == ModelKind::FE_MV || k == ModelKind::RE_MV ||
         k == ModelKind::STREAM;
}
// Mean-side group effects drawn from the hierarchy (vs flat N(0, v) priors).
inline bool mean_effects_random(ModelKind k) {
  return k == ModelKind::RE || k == ModelKind::RE_M || k == ModelKind::RE_MV ||
         k == ModelKind::RE_GP || k == ModelKind::STREAM;
}
// Variance-side group effects drawn from the hierarchy (FE-MV keeps them flat).
inline bool var_effects_random(ModelKind k) {
  return k == ModelKind::RE_MV || k == ModelKind::STREAM;
}

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::FE: return "FE";
    case ModelKind::FE_M: return "FE-M";
    case ModelKind::FE_MV: return "FE-MV";
    case ModelKind::RE: return "RE";
    case ModelKind::RE_M: return "RE-M";
    case ModelKind::RE_MV: return "RE-MV";
    case ModelKind::RE_GP: return "RE-GP";
    case ModelKind::STREAM: return "STREAM";
  }
  return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "FE") return ModelKind::FE;
  if (s == "FE-M") return ModelKind::FE_M;
  if (s == "FE-MV") return ModelKind::FE_MV;
  if (s == "RE") return ModelKind::RE;
  if (s == "RE-M") return ModelKind::RE_M;
  if (s == "RE-MV") return ModelKind::RE_MV;
  if (s == "RE-GP") return ModelKind::RE_GP;
  if (s == "STREAM") return ModelKind::STREAM;
  throw ConfigError("unknown model kind '" + s + "'");
}

struct PriorConfig {
  double m_alpha_theta = 0.0, s_alpha_theta = 1000.0;
  double m_alpha_sigma = 0.0, s_alpha_sigma = 1000.0;
  std::vector<double> m_beta_theta, s_beta_theta;  // length q; empty = defaults
  std::vector<double> m_beta_sigma, s_beta_sigma;
  double eta_a = 2.5, eta_b = 2.5, eta_c = 2.5, eta_d = 2.5;
  double eta_e = 2.5, eta_l = 2.5, eta_sigma = 2.5;
  // Flat-prior baselines use N(0, 1000) (variance 1000) for group effects.
  double fixed_effect_sd = 31.622776601683793;  // sqrt(1000)

  double beta_theta_mean(int k) const {
    return k < static_cast<int>(m_beta_theta.size())
               ? m_beta_theta[static_cast<std::size_t>(k)] : 0.0;
  }
  double beta_theta_sd(int k) const {
    return k < static_cast<int>(s_beta_theta.size())
               ? s_beta_theta[static_cast<std::size_t>(k)] : 1000.0;
  }
  double beta_sigma_mean(int k) const {
    return k < static_cast<int>(m_beta_sigma.size())
               ? m_beta_sigma[static_cast<std::size_t>(k)] : 0.0;
  }
  double beta_sigma_sd(int k) const {
    return k < static_cast<int>(s_beta_sigma.size())
               ? s_beta_sigma[static_cast<std::size_t>(k)] : 1000.0;
  }
};

struct ModelSpec {
  ModelKind kind = ModelKind::STREAM;
  PriorConfig priors;
  double p_e = 12.0;  // kernel period; never inferred

  bool variance_model() const { return models_variance(kind); }
};

// Ordered block map over the flat unconstrained parameter vector.
// Variance-like blocks (tau_*2, sigma_p2, l_p, sigma_i2) hold logs in
// unconstrained space; group-effect blocks hold standardized draws when the
// model treats them as random effects.
struct ParamLayout {
  struct Block {
    std::string name;
    int offset = 0;
    int len = 0;
  };
  std::vector<Block> blocks;
  int total = 0;

  void add(const std::string& name, int len) {
    blocks.push_back({name, total, len});
    total += len;
  }
  bool has(const std::string& name) const {
    for (const auto& b : blocks)
      if (b.name == name) return true;
    return false;
  }
  const Block& block(const std::string& name) const {
    for (const auto& b : blocks)
      if (b.name == name) return b;
    throw ContractError("no parameter block named '" + name + "'");
  }
  // Flattened per-coordinate names, e.g. theta_a.3 (1-based).
  std::vector<std::string> flat_names() const {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(total));
    for (const auto& b : blocks) {
      if (b.len == 1) {
        out.push_back(b.name);
      } else {
        for (int i = 0; i < b.len; ++i)
          out.push_back(b.name + "." + std::to_string(i + 1));
      }
    }
    return out;
  }
};

}  // namespace stream

#endif
