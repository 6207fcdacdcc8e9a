#include "vovlab/estimator.hpp"

#include <cmath>

#include "vovlab/stable_math.hpp"

namespace vov {

void Tuning::validate() const {
  if (!(delta_n > 0.0)) throw config_error("Tuning: delta_n must be positive");
  if (!(h > 0.0)) throw config_error("Tuning: h must be positive");
  if (!std::isfinite(tau)) throw config_error("Tuning: tau must be finite");
  if (k_explicit < 0 || lambda_explicit < 0)
    throw config_error("Tuning: explicit window/step must be positive when given");
  if (k_explicit == 0) {
    if (!(kappa > 0.0)) throw config_error("Tuning: kappa must be positive");
    if (!(b > -1.0 && b <= 0.0))
      throw config_error("Tuning: window exponent b must lie in (-1, 0]");
  }
  if (lambda_explicit == 0) {
    if (!(lambda > 0.0)) throw config_error("Tuning: lambda must be positive");
    if (!(c > 0.0 && c < 1.0))
      throw config_error("Tuning: step exponent c must lie in (0, 1)");
  }
  if (k_n() < 1) throw config_error("Tuning: window length must be at least 1 mesh");
  if (lambda_n() < 1) throw config_error("Tuning: step must be at least 1 mesh");
  if (m_steps() < 1)
    throw config_error("Tuning: horizon shorter than one estimator step");
}

long long Tuning::n() const {
  return static_cast<long long>(std::floor(h / delta_n + 1e-9));
}

long long Tuning::k_n() const {
  if (k_explicit > 0) return k_explicit;
  const double raw = kappa * std::pow(delta_n, b);
  return static_cast<long long>(std::ceil(raw - 1e-12));
}

long long Tuning::lambda_n() const {
  if (lambda_explicit > 0) return lambda_explicit;
  const double raw = lambda * std::pow(delta_n, c - 1.0);
  const long long derived = static_cast<long long>(std::ceil(raw - 1e-12));
  const long long cap = n();
  return derived < cap ? derived : cap;
}

long long Tuning::m_steps() const { return n() / lambda_n(); }

Tuning Tuning::explicit_grid(double delta_n, double h, double tau, long long k,
                             long long lambda_n) {
  Tuning t;
  t.delta_n = delta_n;
  t.h = h;
  t.tau = tau;
  t.k_explicit = k;
  t.lambda_explicit = lambda_n;
  return t;
}

namespace {
// Direct local-window sum; used by the public one-shot entry point.
double larv_at_index(const LogPricePath& path, long long j0, long long k,
                     double delta) {
  if (k < 1) throw config_error("local window length must be at least 1");
  if (j0 - k < 0)
    throw coverage_error("local variance window precedes the start of the path");
  if (j0 > path.grid.n_steps)
    throw coverage_error("local variance window exceeds the end of the path");
  neumaier_sum acc;
  for (long long j = j0 - k + 1; j <= j0; ++j) {
    const double r = path.values[static_cast<std::size_t>(j)] -
                     path.values[static_cast<std::size_t>(j) - 1];
    acc.add(r * r);
  }
  return acc.value() / (static_cast<double>(k) * delta);
}
}  // namespace

double local_avg_rv(const LogPricePath& path, double t, long long k_n) {
  path.grid.validate();
  const long long j0 = grid_floor_index(path.grid, t);
  return larv_at_index(path, j0, k_n, path.grid.dt);
}

ReturnSqPrefix ReturnSqPrefix::build(const LogPricePath& path) {
  path.grid.validate();
  ReturnSqPrefix out;
  out.grid = path.grid;
  out.ps.resize(path.values.size());
  out.ps[0] = 0.0;
  long double acc = 0.0L;
  for (std::size_t j = 1; j < path.values.size(); ++j) {
    const double r = path.values[j] - path.values[j - 1];
    acc += static_cast<long double>(r) * r;
    out.ps[j] = static_cast<double>(acc);
  }
  return out;
}

double ReturnSqPrefix::larv(long long j0, long long k) const {
  if (k < 1) throw config_error("local window length must be at least 1");
  if (j0 - k < 0)
    throw coverage_error("local variance window precedes the start of the path");
  if (j0 > grid.n_steps)
    throw coverage_error("local variance window exceeds the end of the path");
  return (ps[static_cast<std::size_t>(j0)] - ps[static_cast<std::size_t>(j0 - k)]) /
         (static_cast<double>(k) * grid.dt);
}

namespace {
PsrvResult psrv_core(const ReturnSqPrefix& prefix, const Tuning& tuning) {
  tuning.validate();
  if (std::fabs(prefix.grid.dt - tuning.delta_n) >
      1e-9 * (prefix.grid.dt > tuning.delta_n ? prefix.grid.dt : tuning.delta_n))
    throw config_error("tuning mesh does not match the path mesh");

  PsrvResult res;
  res.k_n = tuning.k_n();
  res.lambda_n = tuning.lambda_n();
  res.m_steps = tuning.m_steps();
  res.w_n = tuning.w_n();
  res.big_delta = tuning.big_delta();
  res.h_eff = tuning.h_eff();

  const long long j_tau = grid_floor_index(prefix.grid, tuning.tau);
  double prev = prefix.larv(j_tau, res.k_n);
  neumaier_sum acc;
  for (long long i = 1; i <= res.m_steps; ++i) {
    const double cur = prefix.larv(j_tau + i * res.lambda_n, res.k_n);
    const double d = cur - prev;
    acc.add(d * d);
    prev = cur;
  }
  res.value = acc.value();
  return res;
}
}  // namespace

PsrvResult psrv(const LogPricePath& path, const Tuning& tuning) {
  return psrv_core(ReturnSqPrefix::build(path), tuning);
}

PsrvResult psrv_from_prefix(const ReturnSqPrefix& prefix, const Tuning& tuning) {
  return psrv_core(prefix, tuning);
}

double psrv_windows(const ReturnSqPrefix& prefix, double tau, long long lambda_n,
                    long long m_steps, const std::vector<long long>& ks) {
  if (lambda_n < 1) throw config_error("psrv_windows: step must be at least 1 mesh");
  if (m_steps < 1) throw config_error("psrv_windows: need at least one increment");
  if (ks.size() != static_cast<std::size_t>(m_steps) + 1)
    throw config_error("psrv_windows: need one window length per instant");
  const long long j_tau = grid_floor_index(prefix.grid, tau);
  double prev = prefix.larv(j_tau, ks[0]);
  neumaier_sum acc;
  for (long long i = 1; i <= m_steps; ++i) {
    const double cur = prefix.larv(j_tau + i * lambda_n, ks[static_cast<std::size_t>(i)]);
    const double d = cur - prev;
    acc.add(d * d);
    prev = cur;
  }
  return acc.value();
}

}  // namespace vov
