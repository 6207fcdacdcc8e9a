#pragma once

#include <vector>

#include "vovlab/errors.hpp"
#include "vovlab/sde.hpp"

namespace vov {

// Estimator tuning. The window and step sizes are either derived from the
// rate parametrization
//   k_n      = ceil(kappa * delta_n^b),          b in (-1, 0],
//   lambda_n = min(n, ceil(lambda * delta_n^(c-1))),  c in (0, 1),
// or pinned directly through the explicit overrides (scenario grids give the
// step as an integer multiple of the mesh). Derived quantities are always
// recomputed from the stored fields, never cached.
struct Tuning {
  double delta_n = 0.0;  // observation mesh (years)
  double h = 0.0;        // measurement horizon (years)
  double tau = 0.0;      // measurement start (years)
  double kappa = 0.0;    // window rate constant
  double b = -0.5;       // window rate exponent
  double lambda = 0.0;   // step rate constant
  double c = 0.25;       // step rate exponent
  long long k_explicit = 0;       // > 0: use this window length (in meshes)
  long long lambda_explicit = 0;  // > 0: use this step length (in meshes)

  void validate() const;

  long long n() const;         // observations per horizon: floor(h / delta_n)
  long long k_n() const;       // local-window length, in meshes
  long long lambda_n() const;  // estimator step, in meshes
  long long m_steps() const;   // increments per horizon: floor(h / big_delta)
  double w_n() const { return static_cast<double>(k_n()) * delta_n; }
  double big_delta() const { return static_cast<double>(lambda_n()) * delta_n; }
  double h_eff() const { return static_cast<double>(m_steps()) * big_delta(); }
  bool overlap() const { return k_n() > lambda_n(); }

  static Tuning explicit_grid(double delta_n, double h, double tau, long long k,
                              long long lambda_n);
};

// Local averaged realized variance over the k_n returns ending at the snapped
// grid point for t:  (k delta)^{-1} * sum of the k squared increments.
double local_avg_rv(const LogPricePath& path, double t, long long k_n);

struct PsrvResult {
  double value = 0.0;      // sum of squared increments of the local variance
  long long k_n = 0;
  long long lambda_n = 0;
  long long m_steps = 0;
  double w_n = 0.0;
  double big_delta = 0.0;
  double h_eff = 0.0;      // m_steps * big_delta; the tail of h is ignored
};

// Pre-averaged squared-return prefix sums for O(1) local-variance windows.
struct ReturnSqPrefix {
  PathGrid grid;
  std::vector<double> ps;  // ps[j] = sum over m <= j of (p_m - p_{m-1})^2

  static ReturnSqPrefix build(const LogPricePath& path);
  // Local averaged realized variance for the window of k returns ending at j0.
  double larv(long long j0, long long k) const;
};

// Squared increments of the local variance estimate, stepped by lambda_n
// meshes from tau over floor(h / big_delta) increments.
PsrvResult psrv(const LogPricePath& path, const Tuning& tuning);

// Same estimator on a prebuilt prefix (used by the scenario engine, which
// evaluates many measurement days on one path).
PsrvResult psrv_from_prefix(const ReturnSqPrefix& prefix, const Tuning& tuning);

// Variant with a per-instant window length (jump-calendar adjustments):
// ks[i] is the window, in meshes, used at instant tau + i * big_delta,
// i = 0..m_steps. Window lengths must be positive.
double psrv_windows(const ReturnSqPrefix& prefix, double tau, long long lambda_n,
                    long long m_steps, const std::vector<long long>& ks);

}  // namespace vov
