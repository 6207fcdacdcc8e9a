#include "vovlab/sde.hpp"

#include <cmath>

#include "vovlab/stable_math.hpp"
#include "vovlab/time_convention.hpp"

namespace vov {

void CirParams::validate() const {
  if (!(alpha > 0.0)) throw config_error("CirParams: alpha must be positive");
  if (!(theta > 0.0)) throw config_error("CirParams: theta must be positive");
  if (!(gamma > 0.0)) throw config_error("CirParams: gamma must be positive");
  if (!(nu0 > 0.0)) throw config_error("CirParams: nu0 must be positive");
}

void CklsParams::validate() const {
  cir().validate();
  if (!(beta > 0.0)) throw config_error("CklsParams: beta must be positive");
  if (!(rho > -1.0 && rho < 1.0)) throw config_error("CklsParams: rho must lie in (-1, 1)");
  if (!std::isfinite(mu)) throw config_error("CklsParams: mu must be finite");
}

void PathGrid::validate() const {
  if (!(dt > 0.0)) throw config_error("PathGrid: dt must be positive");
  if (n_steps < 1) throw config_error("PathGrid: n_steps must be at least 1");
  if (!std::isfinite(t_start)) throw config_error("PathGrid: t_start must be finite");
}

void NoiseSpec::validate() const {
  if (use_zeta()) {
    if (!std::isfinite(zeta)) throw config_error("NoiseSpec: zeta must be finite");
  } else {
    if (v_eta < 0.0) throw config_error("NoiseSpec: v_eta must be nonnegative");
    if (q_eta < v_eta * v_eta)
      throw config_error("NoiseSpec: q_eta must be at least v_eta^2");
  }
}

long long grid_floor_index(const PathGrid& grid, double t) {
  const double q = (t - grid.t_start) / grid.dt;
  const long long j = static_cast<long long>(std::floor(q + 1e-9));
  if (j < 0)
    throw coverage_error("time precedes the start of the available path");
  if (j > grid.n_steps)
    throw coverage_error("time exceeds the end of the available path");
  return j;
}

namespace {

// Precomputed constants of the exact square-root-diffusion transition over a
// fixed mesh: nu' = cfac * noncentral-chi-square(dof, nu * decay / cfac).
struct ExactCirStep {
  double cfac;
  double dof;
  double decay;

  ExactCirStep(const CirParams& p, double dt) {
    decay = std::exp(-p.theta * dt);
    cfac = p.gamma * p.gamma *
           static_cast<double>(one_m_emx(static_cast<long double>(p.theta) * dt)) /
           (4.0 * p.theta);
    dof = p.transition_dof();
    if (!(dof > 1.0))
      throw config_error(
          "exact variance transition requires 4*alpha*theta/gamma^2 > 1");
  }

  double advance(Rng& rng, double nu) const {
    const double nc = nu * decay / cfac;
    return cfac * rng.chi2_noncentral(dof, nc);
  }
};

}  // namespace

VolPath simulate_cir(const CirParams& params, const PathGrid& grid, std::uint64_t seed) {
  params.validate();
  grid.validate();
  const ExactCirStep step(params, grid.dt);
  Rng rng(seed, 0, StreamPurpose::VolLeg);

  VolPath out;
  out.grid = grid;
  out.values.resize(static_cast<std::size_t>(grid.n_steps) + 1);
  out.values[0] = params.nu0;
  for (long long i = 0; i < grid.n_steps; ++i) {
    out.values[static_cast<std::size_t>(i) + 1] =
        step.advance(rng, out.values[static_cast<std::size_t>(i)]);
  }
  return out;
}

CklsPaths simulate_ckls(const CklsParams& params, const PathGrid& grid, std::uint64_t seed) {
  params.validate();
  grid.validate();
  const bool exact_leg = (params.beta == 0.5);
  Rng zrng(seed, 0, StreamPurpose::VolLeg);
  Rng brng(seed, 0, StreamPurpose::PriceLeg);

  const double dt = grid.dt;
  const double sdt = std::sqrt(dt);
  const double rho = params.rho;
  const double orth = std::sqrt(1.0 - rho * rho);
  const double theta = params.theta;
  const double alpha = params.alpha;
  const double gamma = params.gamma;
  const double beta = params.beta;

  CklsPaths out;
  out.vol.grid = grid;
  out.price.grid = grid;
  const std::size_t np = static_cast<std::size_t>(grid.n_steps) + 1;
  out.vol.values.resize(np);
  out.price.values.resize(np);
  out.vol.values[0] = params.nu0;
  out.price.values[0] = 0.0;

  if (exact_leg) {
    const ExactCirStep step(params.cir(), dt);
    for (std::size_t i = 0; i + 1 < np; ++i) {
      const double nu = out.vol.values[i];
      const double nu_next = step.advance(zrng, nu);
      out.vol.values[i + 1] = nu_next;
      // Correlated part of the price increment, written through the variance
      // increment so it stays finite as nu approaches zero:
      //   sqrt(nu) * rho * dZ = (rho / gamma) * (d nu - theta (alpha - nu) dt).
      const double corr = (rho / gamma) * (nu_next - nu - theta * (alpha - nu) * dt);
      const double nup = nu > 0.0 ? nu : 0.0;
      out.price.values[i + 1] = out.price.values[i] + params.mu * dt + corr +
                                std::sqrt(nup) * orth * sdt * brng.normal();
    }
  } else {
    for (std::size_t i = 0; i + 1 < np; ++i) {
      const double nu = out.vol.values[i];
      const double nup = nu > 0.0 ? nu : 0.0;
      double diff;  // nup^beta, specialized for the common elasticities
      if (beta == 1.0)
        diff = nup;
      else if (beta == 1.5)
        diff = nup * std::sqrt(nup);
      else
        diff = std::pow(nup, beta);
      const double dz = sdt * zrng.normal();
      out.vol.values[i + 1] = nu + theta * (alpha - nup) * dt + gamma * diff * dz;
      out.price.values[i + 1] = out.price.values[i] + params.mu * dt +
                                std::sqrt(nup) * (rho * dz + orth * sdt * brng.normal());
    }
  }
  return out;
}

LogPricePath add_noise(const LogPricePath& path, const NoiseSpec& spec, std::uint64_t seed,
                       double* v_out) {
  spec.validate();
  path.grid.validate();

  double v = spec.v_eta;
  if (spec.use_zeta()) {
    if (spec.zeta == 0.0) {
      if (v_out) *v_out = 0.0;
      return path;
    }
    if (std::fabs(path.grid.dt * kSecondsPerYear - 1.0) > 1e-6)
      throw config_error("zeta-calibrated noise requires a one-second grid");
    running_stats rs;
    for (std::size_t i = 1; i < path.values.size(); ++i)
      rs.add(path.values[i] - path.values[i - 1]);
    if (rs.n < 2) throw data_error("zeta-calibrated noise needs at least two returns");
    v = spec.zeta * spec.zeta * rs.variance() / 2.0;
  }
  if (v_out) *v_out = v;
  if (v == 0.0) return path;

  Rng rng(seed, 0, StreamPurpose::Noise);
  const double sd = std::sqrt(v);
  LogPricePath out;
  out.grid = path.grid;
  out.values.resize(path.values.size());
  for (std::size_t i = 0; i < path.values.size(); ++i)
    out.values[i] = path.values[i] + sd * rng.normal();
  return out;
}

namespace {
template <typename PathT>
PathT subsample_impl(const PathT& path, long long stride) {
  if (stride < 1) throw config_error("subsample: stride must be at least 1");
  path.grid.validate();
  PathT out;
  out.grid.t_start = path.grid.t_start;
  out.grid.dt = path.grid.dt * static_cast<double>(stride);
  out.grid.n_steps = path.grid.n_steps / stride;
  if (out.grid.n_steps < 1)
    throw data_error("subsample: stride leaves fewer than two points");
  out.values.resize(static_cast<std::size_t>(out.grid.n_steps) + 1);
  for (long long i = 0; i <= out.grid.n_steps; ++i)
    out.values[static_cast<std::size_t>(i)] =
        path.values[static_cast<std::size_t>(i * stride)];
  return out;
}
}  // namespace

LogPricePath subsample(const LogPricePath& path, long long stride) {
  return subsample_impl(path, stride);
}
VolPath subsample(const VolPath& path, long long stride) {
  return subsample_impl(path, stride);
}

double true_qv(const VolPath& vol, double tau, double h) {
  if (!(h > 0.0)) throw config_error("true_qv: horizon must be positive");
  const long long j0 = grid_floor_index(vol.grid, tau);
  const long long j1 = grid_floor_index(vol.grid, tau + h);
  neumaier_sum acc;
  for (long long j = j0; j < j1; ++j) {
    const double d = vol.values[static_cast<std::size_t>(j) + 1] -
                     vol.values[static_cast<std::size_t>(j)];
    acc.add(d * d);
  }
  return acc.value();
}

double vol_at(const VolPath& vol, double t) {
  return vol.values[static_cast<std::size_t>(grid_floor_index(vol.grid, t))];
}

}  // namespace vov
