#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace vov {

// Numerically stable primitives shared by the closed-form bias layer and the
// simulators. The bias formulas are dominated by differences of exponentials
// with nearly equal arguments, so everything funnels through expm1-style
// helpers evaluated in long double.

inline long double em1(long double x) { return ::expm1l(x); }

// 1 - e^{-x}, accurate for tiny x.
inline long double one_m_emx(long double x) { return -::expm1l(-x); }

// e^x - 1 - x, accurate for tiny x (relative error well below 1e-12 on
// |x| <= 1). Series for small arguments, direct difference otherwise.
inline long double em1m(long double x) {
  if (x >= 0.5L || x <= -0.5L) return ::expm1l(x) - x;
  long double term = x * x * 0.5L;
  long double sum = term;
  for (int n = 3; n < 48; ++n) {
    term *= x / static_cast<long double>(n);
    sum += term;
    if (term < 1e-24L * sum && term > -1e-24L * sum) break;
  }
  return sum;
}

inline double em1m(double x) { return static_cast<double>(em1m(static_cast<long double>(x))); }

template <typename T>
inline T sq(T x) {
  return x * x;
}

// Inverse standard normal CDF, Wichura's PPND16 rational approximations.
// Full double accuracy on (0,1); +/-infinity at the endpoints.
inline double inv_norm_cdf(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  const double q = p - 0.5;
  if (q >= -0.425 && q <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

// Compensated (Neumaier) accumulator for long sums of doubles.
struct neumaier_sum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

// Streaming mean/variance (Welford).
struct running_stats {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return (n > 1) ? m2 / static_cast<double>(n - 1) : 0.0; }
  double sd() const { return std::sqrt(variance()); }
  double se() const { return (n > 0) ? sd() / std::sqrt(static_cast<double>(n)) : 0.0; }
};

}  // namespace vov
