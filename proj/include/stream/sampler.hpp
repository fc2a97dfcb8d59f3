#ifndef STREAM_SAMPLER_HPP
#define STREAM_SAMPLER_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <cstdlib>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stream/errors.hpp"
#include "stream/logdensity.hpp"
#include "stream/model.hpp"
#include "stream/rng.hpp"

namespace stream {

struct SamplerConfig {
  int chains = 4;
  int warmup = 2000;
  int samples = 8000;
  int leapfrog_steps = 32;      // jittered +-50% each iteration
  double target_accept = 0.8;
  std::uint64_t seed = 0;
  bool adapt_mass = true;       // diagonal metric from the warmup second half
  double init_radius = 2.0;     // unconstrained init ~ U(-r, r)
  int max_init_retries = 100;
  double max_divergence_rate = 0.25;
};

struct ChainResult {
  Eigen::MatrixXd draws;  // samples x P, constrained space
  double accept_rate = 0.0;
  double step_size = 0.0;
  int divergences = 0;
};

struct PosteriorDraws {
  std::vector<ChainResult> chains;
  ParamLayout layout;
  std::vector<std::string> names;  // flattened parameter names

  int num_params() const { return layout.total; }
  int samples_per_chain() const {
    return chains.empty() ? 0 : static_cast<int>(chains.front().draws.rows());
  }
  // Pooled draws for one parameter across all chains, chain-major.
  Eigen::VectorXd pooled(int param) const {
    Eigen::Index total = 0;
    for (const auto& c : chains) total += c.draws.rows();
    Eigen::VectorXd out(total);
    Eigen::Index at = 0;
    for (const auto& c : chains) {
      out.segment(at, c.draws.rows()) = c.draws.col(param);
      at += c.draws.rows();
    }
    return out;
  }
};

inline int thread_cap() {
  if (const char* env = std::getenv("STREAM_META_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Leapfrog integration of H(q, p) = -logpi(q) + 1/2 p' M^-1 p.
// Returns false (divergence) on any non-finite intermediate state.
template <typename GradFn>
bool leapfrog(Eigen::VectorXd& q, Eigen::VectorXd& p, double eps, int steps,
              GradFn&& grad, const Eigen::VectorXd& inv_mass) {
  if (steps <= 0 || eps == 0.0) return true;
  Eigen::VectorXd g = grad(q);
  if (!g.allFinite()) return false;
  p += 0.5 * eps * g;
  for (int s = 0; s < steps; ++s) {
    q += eps * inv_mass.cwiseProduct(p);
    if (!q.allFinite()) return false;
    g = grad(q);
    if (!g.allFinite()) return false;
    p += (s + 1 == steps ? 0.5 : 1.0) * eps * g;
    if (!p.allFinite()) return false;
  }
  return true;
}

template <typename GradFn>
bool leapfrog(Eigen::VectorXd& q, Eigen::VectorXd& p, double eps, int steps,
              GradFn&& grad) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(q.size());
  return leapfrog(q, p, eps, steps, std::forward<GradFn>(grad), ones);
}

// Nesterov dual averaging of log(eps) toward a target acceptance rate.
class DualAveraging {
 public:
  DualAveraging(double eps0, double target, double gamma = 0.05,
                double t0 = 10.0, double kappa = 0.75)
      : mu_(std::log(10.0 * eps0)),
        log_eps_(std::log(eps0)),
        log_eps_bar_(std::log(eps0)),
        target_(target),
        gamma_(gamma),
        t0_(t0),
        kappa_(kappa) {}

  void update(double accept_prob) {
    ++iter_;
    const double frac = 1.0 / (iter_ + t0_);
    h_bar_ = (1.0 - frac) * h_bar_ + frac * (target_ - accept_prob);
    log_eps_ = mu_ - std::sqrt(static_cast<double>(iter_)) / gamma_ * h_bar_;
    const double w = std::pow(static_cast<double>(iter_), -kappa_);
    log_eps_bar_ = w * log_eps_ + (1.0 - w) * log_eps_bar_;
  }

  double current() const { return std::exp(log_eps_); }
  double adapted() const { return std::exp(log_eps_bar_); }

 private:
  double mu_, log_eps_, log_eps_bar_, h_bar_ = 0.0;
  double target_, gamma_, t0_, kappa_;
  long iter_ = 0;
};

namespace detail {

template <typename Target>
double hamiltonian(const Target& target, const Eigen::VectorXd& q,
                   const Eigen::VectorXd& p, const Eigen::VectorXd& inv_mass) {
  return -target.log_density(q) + 0.5 * p.dot(inv_mass.cwiseProduct(p));
}

inline Eigen::VectorXd draw_momentum(const Eigen::VectorXd& inv_mass,
                                     Rng& rng) {
  Eigen::VectorXd p(inv_mass.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
    p(i) = draw_normal(rng) / std::sqrt(inv_mass(i));
  return p;
}

// Crude bracketing of a starting step size: double/halve until the one-step
// acceptance probability crosses 1/2.
template <typename Target>
double initial_step_size(const Target& target, const Eigen::VectorXd& q0,
                         const Eigen::VectorXd& inv_mass, Rng& rng) {
  double eps = 0.1;
  Eigen::VectorXd p0(q0.size());
  for (Eigen::Index i = 0; i < p0.size(); ++i)
    p0(i) = draw_normal(rng) / std::sqrt(inv_mass(i));
  auto grad = [&](const Eigen::VectorXd& q) { return target.grad(q); };
  auto log_ratio = [&](double e) {
    Eigen::VectorXd q = q0, p = p0;
    if (!leapfrog(q, p, e, 1, grad, inv_mass))
      return -std::numeric_limits<double>::infinity();
    return hamiltonian(target, q0, p0, inv_mass) -
           hamiltonian(target, q, p, inv_mass);
  };
  double r = log_ratio(eps);
  if (!std::isfinite(r)) {
    while (!std::isfinite(r) && eps > 1e-10) {
      eps *= 0.5;
      r = log_ratio(eps);
    }
    return std::max(eps, 1e-10);
  }
  const double dir = r > std::log(0.5) ? 1.0 : -1.0;
  for (int it = 0; it < 50; ++it) {
    eps *= dir > 0 ? 2.0 : 0.5;
    r = log_ratio(eps);
    if (!std::isfinite(r)) { eps *= 0.5; break; }
    if ((dir > 0 && r < std::log(0.5)) || (dir < 0 && r > std::log(0.5))) break;
  }
  return std::clamp(eps, 1e-10, 10.0);
}

}  // namespace detail

// Targets may provide a data-informed starting point; otherwise chains start
// from unconstrained U(-r, r).
template <typename T>
concept HasInitialPoint = requires(const T& t, Rng& rng, double radius) {
  { t.initial_point(rng, radius) } -> std::convertible_to<Eigen::VectorXd>;
};

// One HMC chain. Target must provide:
//   int dim() const;
//   double log_density(const VectorXd&) const;   (-inf rejects)
//   VectorXd grad(const VectorXd&) const;
//   VectorXd constrain(const VectorXd&) const;
template <typename Target>
ChainResult run_chain(const Target& target, const SamplerConfig& cfg,
                      int chain_index) {
  const int P = target.dim();
  Rng rng = make_rng(derive_seed(cfg.seed, tag_of("chain"),
                                 static_cast<std::uint64_t>(chain_index)));
  auto grad = [&](const Eigen::VectorXd& q) { return target.grad(q); };

  // initialization, retried until the density is finite
  Eigen::VectorXd q(P);
  bool ok = false;
  for (int attempt = 0; attempt < cfg.max_init_retries; ++attempt) {
    if constexpr (HasInitialPoint<Target>) {
      q = target.initial_point(rng, cfg.init_radius);
    } else {
      for (int i = 0; i < P; ++i)
        q(i) = draw_uniform(rng, -cfg.init_radius, cfg.init_radius);
    }
    if (std::isfinite(target.log_density(q))) { ok = true; break; }
  }
  if (!ok)
    throw NumericalError("chain " + std::to_string(chain_index) +
                         ": no finite initialization found");

  Eigen::VectorXd inv_mass = Eigen::VectorXd::Ones(P);
  double eps = detail::initial_step_size(target, q, inv_mass, rng);
  DualAveraging da(eps, cfg.target_accept);

  // Stan-style schedule: an initial step-size-only phase, then expanding
  // variance windows (metric + step size refreshed at each window end), then
  // a final phase that only polishes the step size.
  const int adapt_start = std::max(1, cfg.warmup * 3 / 20);
  const int adapt_end = cfg.warmup - std::max(cfg.warmup / 10, 1);
  std::vector<int> window_ends;
  if (cfg.adapt_mass && adapt_end - adapt_start >= 20) {
    int w = std::max(20, (adapt_end - adapt_start) / 7);
    int at = adapt_start;
    while (true) {
      at += w;
      if (at >= adapt_end || adapt_end - at < w) {
        window_ends.push_back(adapt_end);
        break;
      }
      window_ends.push_back(at);
      w *= 2;
    }
  }
  std::size_t window = 0;
  Eigen::VectorXd var_sum = Eigen::VectorXd::Zero(P);
  Eigen::VectorXd var_sum2 = Eigen::VectorXd::Zero(P);
  int var_n = 0;

  auto one_transition = [&](double step, bool* accepted) -> double {
    Eigen::VectorXd p = detail::draw_momentum(inv_mass, rng);
    const double h0 = detail::hamiltonian(target, q, p, inv_mass);
    const int steps = std::max(
        1, static_cast<int>(std::lround(cfg.leapfrog_steps *
                                        draw_uniform(rng, 0.5, 1.5))));
    Eigen::VectorXd q1 = q, p1 = p;
    double alpha = 0.0;
    if (leapfrog(q1, p1, step, steps, grad, inv_mass)) {
      const double h1 = detail::hamiltonian(target, q1, p1, inv_mass);
      if (std::isfinite(h1)) alpha = std::min(1.0, std::exp(h0 - h1));
    }
    *accepted = false;
    if (draw_uniform(rng, 0.0, 1.0) < alpha) {
      q = std::move(q1);
      *accepted = true;
    }
    return alpha;
  };

  for (int it = 0; it < cfg.warmup; ++it) {
    bool accepted = false;
    const double alpha = one_transition(da.current(), &accepted);
    da.update(alpha);
    if (window < window_ends.size() && it >= adapt_start) {
      var_sum += q;
      var_sum2 += q.cwiseProduct(q);
      ++var_n;
      if (it + 1 == window_ends[window]) {
        if (var_n >= 10) {
          Eigen::VectorXd mean = var_sum / var_n;
          Eigen::VectorXd var =
              (var_sum2 / var_n - mean.cwiseProduct(mean)).cwiseMax(1e-10);
          // regularize toward unit scale, as the estimate is short
          const double shrink =
              static_cast<double>(var_n) / (var_n + 5.0);
          inv_mass =
              (shrink * var.array() + (1.0 - shrink) * 1e-3).matrix();
          eps = detail::initial_step_size(target, q, inv_mass, rng);
          da = DualAveraging(eps, cfg.target_accept);
        }
        var_sum.setZero();
        var_sum2.setZero();
        var_n = 0;
        ++window;
      }
    }
  }
  const double eps_fixed = cfg.warmup > 0 ? da.adapted() : eps;

  ChainResult res;
  res.draws.resize(cfg.samples, P);
  res.step_size = eps_fixed;
  long accepts = 0;
  for (int it = 0; it < cfg.samples; ++it) {
    bool accepted = false;
    const double alpha = one_transition(eps_fixed, &accepted);
    if (accepted) ++accepts;
    if (alpha == 0.0) ++res.divergences;
    res.draws.row(it) = target.constrain(q).transpose();
  }
  res.accept_rate = static_cast<double>(accepts) / cfg.samples;
  if (res.divergences >
      static_cast<int>(cfg.max_divergence_rate * cfg.samples))
    throw NumericalError("chain " + std::to_string(chain_index) +
                         ": divergence rate above " +
                         std::to_string(cfg.max_divergence_rate));
  return res;
}

template <typename Target>
PosteriorDraws run_chains_on(const Target& target, const SamplerConfig& cfg,
                             const ParamLayout& layout) {
  PosteriorDraws out;
  out.layout = layout;
  out.names = layout.flat_names();
  out.chains.resize(static_cast<std::size_t>(cfg.chains));

  const int workers = std::min(cfg.chains, thread_cap());
  if (workers <= 1) {
    for (int c = 0; c < cfg.chains; ++c)
      out.chains[static_cast<std::size_t>(c)] = run_chain(target, cfg, c);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::string> errors(static_cast<std::size_t>(cfg.chains));
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int c = next.fetch_add(1);
        if (c >= cfg.chains) return;
        try {
          out.chains[static_cast<std::size_t>(c)] = run_chain(target, cfg, c);
        } catch (const std::exception& e) {
          errors[static_cast<std::size_t>(c)] = e.what();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) throw NumericalError(e);
  return out;
}

// Adapter exposing a LogDensityModel as a sampler target.
class ModelTarget {
 public:
  explicit ModelTarget(const LogDensityModel& model) : model_(&model) {}
  int dim() const { return model_->layout().total; }
  double log_density(const Eigen::VectorXd& q) const {
    return model_->log_posterior(q);
  }
  Eigen::VectorXd grad(const Eigen::VectorXd& q) const {
    try {
      return model_->grad_log_posterior(q);
    } catch (const NumericalError&) {
      return Eigen::VectorXd::Constant(dim(),
                                       std::numeric_limits<double>::quiet_NaN());
    }
  }
  Eigen::VectorXd constrain(const Eigen::VectorXd& q) const {
    return model_->constrain(q);
  }
  Eigen::VectorXd initial_point(Rng& rng, double radius) const {
    return model_->initial_point(rng, radius);
  }

 private:
  const LogDensityModel* model_;
};

inline PosteriorDraws run_chains(const LogDensityModel& model,
                                 const SamplerConfig& cfg) {
  return run_chains_on(ModelTarget(model), cfg, model.layout());
}

}  // namespace stream

#endif
