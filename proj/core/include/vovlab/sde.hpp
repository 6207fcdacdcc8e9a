#pragma once

#include <cstdint>
#include <vector>

#include "vovlab/errors.hpp"
#include "vovlab/rng.hpp"

namespace vov {

// Square-root mean-reverting variance:
//   d nu = theta (alpha - nu) dt + gamma sqrt(nu) dZ.
struct CirParams {
  double alpha = 0.0;  // long-run variance level
  double theta = 0.0;  // mean-reversion speed (1/years)
  double gamma = 0.0;  // volatility of volatility
  double nu0 = 0.0;    // variance at the first grid point

  void validate() const;
  // Degrees of freedom of the exact transition; > 2 iff the boundary is
  // unattainable (2 alpha theta > gamma^2).
  double transition_dof() const { return 4.0 * alpha * theta / (gamma * gamma); }
};

// Constant-elasticity variance with a drifting, correlated log price:
//   d p  = mu dt + sqrt(nu) dW,   d nu = theta (alpha - nu) dt + gamma nu^beta dZ,
//   dW = rho dZ + sqrt(1-rho^2) dB.
struct CklsParams {
  double alpha = 0.0;
  double theta = 0.0;
  double gamma = 0.0;
  double beta = 0.5;  // diffusion elasticity
  double mu = 0.0;    // log-price drift
  double rho = 0.0;   // price/variance correlation
  double nu0 = 0.0;

  void validate() const;
  CirParams cir() const { return CirParams{alpha, theta, gamma, nu0}; }
};

// Uniform sampling grid: times t_i = t_start + i * dt for i = 0..n_steps.
struct PathGrid {
  double t_start = 0.0;
  double dt = 0.0;       // mesh, in years
  long long n_steps = 0; // number of increments; n_steps + 1 points

  void validate() const;
  double time_at(long long i) const { return t_start + static_cast<double>(i) * dt; }
  double t_end() const { return time_at(n_steps); }
};

// Largest grid index i with t_i <= t, where times within one nanostep
// (1e-9 * dt) below a grid point snap up to it. Keeps floor semantics robust
// to accumulated floating-point error in t.
long long grid_floor_index(const PathGrid& grid, double t);

struct VolPath {
  PathGrid grid;
  std::vector<double> values;  // nu at each grid point
};

struct LogPricePath {
  PathGrid grid;
  std::vector<double> values;  // log price at each grid point
};

struct CklsPaths {
  VolPath vol;
  LogPricePath price;
};

// Observation noise: either explicit moments (variance V, fourth moment Q) or
// a signal-scaled level zeta, which calibrates V = zeta^2 * Var(r_1s) / 2 from
// the path's own one-second returns. Generated noise is Gaussian, so the
// generated fourth moment is 3 V^2; q_eta is carried for formula evaluation.
struct NoiseSpec {
  double v_eta = 0.0;
  double q_eta = 0.0;
  double zeta = -1.0;  // < 0: use explicit moments; >= 0: calibrate from path

  bool use_zeta() const { return zeta >= 0.0; }
  void validate() const;

  static NoiseSpec from_moments(double v, double q) { return NoiseSpec{v, q, -1.0}; }
  static NoiseSpec from_zeta(double z) { return NoiseSpec{0.0, 0.0, z}; }
};

// Exact variance-path simulation via noncentral-chi-square transitions.
// Draws come from the VolLeg substream of `seed`.
VolPath simulate_cir(const CirParams& params, const PathGrid& grid, std::uint64_t seed);

// Joint variance/log-price simulation. At beta = 1/2 the variance leg uses the
// same exact transitions (and the same substream) as simulate_cir, and the
// variance innovation is reconstructed from the realized increment so the
// price leg keeps its correlation; for other beta the variance leg is a
// full-truncation Euler scheme. The price leg is Euler at the grid mesh with
// left-point variance, started at log price 0.
CklsPaths simulate_ckls(const CklsParams& params, const PathGrid& grid, std::uint64_t seed);

// Add i.i.d. Gaussian observation noise to a log-price path. Draws come from
// the Noise substream of `seed`. In zeta mode the grid must be a one-second
// mesh (the calibration convention); the calibrated variance is written to
// *v_out when provided. zeta = 0 or v_eta = 0 returns the input unchanged and
// consumes no draws.
LogPricePath add_noise(const LogPricePath& path, const NoiseSpec& spec, std::uint64_t seed,
                       double* v_out = nullptr);

// Keep every stride-th point (starting at index 0). Noise that is i.i.d. on
// the fine grid stays i.i.d. on the subsampled grid.
LogPricePath subsample(const LogPricePath& path, long long stride);
VolPath subsample(const VolPath& path, long long stride);

// Realized quadratic variation of the variance path over [tau, tau + h]:
// the sum of squared grid increments of nu between the snapped endpoints.
double true_qv(const VolPath& vol, double tau, double h);

// Variance value at the snapped grid index for time t.
double vol_at(const VolPath& vol, double t);

}  // namespace vov
