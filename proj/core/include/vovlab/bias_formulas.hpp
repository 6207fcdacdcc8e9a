#pragma once

#include <cmath>
#include <cstdint>

#include "vovlab/stable_math.hpp"

// Closed-form finite-sample moment algebra for the squared-increment
// estimator of the variance of variance, under a square-root variance process
// whose variance level at the measurement anchor is treated as deterministic.
//
// The public entry points are the assembled route (window second moments plus
// regime-specific cross moments, summed increment by increment) and the
// compact route (window factors A and B, dispersion block C, overlap
// adjustment O, and the observation-noise inflation terms). The two routes
// are algebraically identical; keeping both makes the equivalence testable.
//
// Everything is evaluated in long double. Differences of nearly equal
// exponentials go through expm1-based helpers so the window==step boundary
// vanishes exactly and fine (one-second) meshes keep full relative accuracy.

namespace vov::fml {

using real = long double;

inline real rx(real x) { return ::expl(x); }

// 1 - e^{-2x} - 2x e^{-x}: a third-order decay combination (~ x^3/3) that
// would lose all precision as a raw difference of O(x) quantities.
inline real decay3(real x) {
  if (x >= 0.25L || x <= -0.25L) return one_m_emx(2.0L * x) - 2.0L * x * rx(-x);
  // series sum_{n>=3} c_n x^n with c_n = -(-2)^n/n! + 2(-1)^n/(n-1)!
  real p = -4.0L / 3.0L;  // (-2)^n / n!          at n = 3
  real q = -0.5L;         // (-1)^n / (n-1)!      at n = 3
  real xn = x * x * x;
  real sum = 0.0L;
  for (int n = 3; n < 40; ++n) {
    const real cn = -p + 2.0L * q;
    const real term = cn * xn;
    sum += term;
    if (term < 1e-25L * sum && term > -1e-25L * sum) break;
    p *= -2.0L / static_cast<real>(n + 1);
    q *= -1.0L / static_cast<real>(n);
    xn *= x;
  }
  return sum;
}

// Deterministic-anchor moment configuration: variance dynamics
// (theta, alpha, gamma2), the anchor mean m = E[nu at the measurement start],
// the observation mesh, and the estimator geometry in mesh counts.
struct Kernel {
  real theta;
  real alpha;
  real gamma2;
  real m;
  real delta;
  long long k;       // local-window length, in meshes
  long long lam;     // estimator step, in meshes
  long long msteps;  // increments per horizon

  real big_delta() const { return delta * static_cast<real>(lam); }
  real w() const { return delta * static_cast<real>(k); }
  real h() const { return big_delta() * static_cast<real>(msteps); }
  // Second-moment dispersion of the anchor extension.
  real m2t() const {
    return sq(m - alpha) + gamma2 / theta * (alpha * 0.5L - m);
  }
  bool overlap() const { return k > lam; }
};

// Mean quadratic variation of the variance over the effective horizon.
inline real expected_qv(const Kernel& c) {
  return c.gamma2 * (c.alpha * c.h() + (c.m - c.alpha) * one_m_emx(c.theta * c.h()) / c.theta);
}

// Second moment of one local realized-variance window: E[RV^2] for the
// window of kp meshes ending at anchor-offset i * big_delta.
inline real window_second_moment(const Kernel& c, long long i, long long kp) {
  if (kp == 0) return 0.0L;
  const real th = c.theta, al = c.alpha, g2 = c.gamma2, m = c.m, d = c.delta;
  const real iD = static_cast<real>(i) * c.big_delta();
  const real kd = static_cast<real>(kp) * d;
  const real M2 = c.m2t();
  const real kpr = static_cast<real>(kp);

  const real omd = one_m_emx(th * d);         // 1 - e^{-theta delta}
  const real dec = decay3(th * d);            // third-order decay combination

  // dispersion ladder across the window
  const real T1 = one_m_emx(2.0L * th * kd) / one_m_emx(2.0L * th * d) *
                  rx(-2.0L * th * iD + 2.0L * th * kd) * sq(omd) * 3.0L / sq(th) * M2;
  // anchor-offset coupling of the dispersion ladder
  const real T2 = one_m_emx(th * kd) / omd * rx(-th * iD + th * kd) *
                  (g2 / th * (m - al) * 3.0L / sq(th) * sq(omd)
                   + g2 / th * (dec / th) * 3.0L / th * (m - al)
                   + 6.0L * al / th * d * omd * (m - al));
  // level channel, linear in the window length
  const real T3 = g2 / th * kpr *
                  (3.0L * al / (2.0L * sq(th)) * sq(omd)
                   + 3.0L * al / th * (dec / th)
                   + 3.0L * al / th * d * (1.0L + 2.0L * rx(-th * d))
                   + 3.0L * al / (2.0L * sq(th)) * (em1(-2.0L * th * d) + 4.0L * em1(-th * d)));
  const real T4 = 3.0L * sq(al) * sq(d) * kpr;
  // within-window pair couplings of the dispersion
  const real T5 = 2.0L * M2 / sq(th) * rx(2.0L * th * kd - 2.0L * th * iD - th * d) *
                  (1.0L - rx(-th * static_cast<real>(kp - 1) * d) + rx(-th * static_cast<real>(kp + 1) * d)
                   - rx(-th * d) + rx(-th * static_cast<real>(2 * kp - 1) * d) - rx(-2.0L * th * kd)) /
                  one_m_emx(2.0L * th * d);
  // mixed level/offset channels
  const real geom_p = em1(th * kd) - kpr * em1(th * d);    // e^{th kd}-1+kp-kp e^{th d}
  const real geom_m = em1(-th * kd) - kpr * em1(-th * d);  // e^{-th kd}-1+kp-kp e^{-th d}
  const real T6 = 2.0L * al * (m - al) / th * d * rx(th * kd - th * iD) / em1(th * d) *
                  (rx(-th * kd) * geom_p + kpr * em1(th * d) + rx(th * d) * em1(-th * kd));
  const real T7 = 2.0L * g2 / th * (m - al) / th * d * rx(-th * iD) * geom_p / em1(th * d);
  const real T8 = g2 * al / (th * sq(th)) * geom_m;
  const real T9 = sq(al) * sq(d) * static_cast<real>(kp * kp - kp);
  return T1 + T2 + T3 + T4 + T5 + T6 + T7 + T8 + T9;
}

// Cross moment E[RV_i RV_{i-1}] when consecutive windows do not overlap
// (window <= step).
inline real cross_no_overlap(const Kernel& c, long long i) {
  const real th = c.theta, al = c.alpha, g2 = c.gamma2, m = c.m;
  const real D = c.big_delta(), kd = c.w();
  const real iD = static_cast<real>(i) * D;
  const real M2 = c.m2t();
  return M2 / sq(th) * rx(th * D - 2.0L * th * iD) * sq(em1(th * kd))
         + rx(-th * D) * (em1(th * kd) + em1(-th * kd)) * g2 * al / (2.0L * th * sq(th))
         + kd / th * em1(th * kd) * rx(-th * iD) * (g2 / th + al) * (m - al)
         + kd / th * em1(th * kd) * rx(th * D - th * iD) * al * (m - al)
         + sq(al) * sq(kd);
}

// Cross moment pieces when consecutive windows overlap (window > step).
// The shared stretch of the two windows contributes the shrunk-window second
// moment (piece o4); the flanking stretches give o1..o3. At window == step,
// o2, o3, o4 vanish and o1 reduces to the disjoint cross moment.
struct OverlapCrossPieces {
  real o1, o2, o3, o4;
  real sum() const { return o1 + o2 + o3 + o4; }
};

inline OverlapCrossPieces cross_overlap_pieces(const Kernel& c, long long i) {
  const real th = c.theta, al = c.alpha, g2 = c.gamma2, m = c.m, d = c.delta;
  const real D = c.big_delta(), kd = c.w();
  const real iD = static_cast<real>(i) * D;
  const real i1D = static_cast<real>(i - 1) * D;
  const real M2 = c.m2t();
  // window minus step, formed from the integer difference so the boundary
  // window == step is exact
  const real wmd = d * static_cast<real>(c.k - c.lam);
  const real e_wmd = em1(th * wmd);  // e^{theta (W - Delta)} - 1

  OverlapCrossPieces p;
  p.o1 = sq(al) * sq(D)
         + (m - al) * (g2 / th + al) * D / th * rx(-th * iD) * em1(th * D)
         + al * (m - al) * D / th * rx(-th * iD + th * kd) * em1(th * D)
         + g2 * al / (2.0L * th * sq(th)) * rx(-th * kd) * (em1(th * D) + em1(-th * D))
         + M2 / sq(th) * rx(-2.0L * th * iD) * sq(em1(th * D)) * rx(th * kd);
  p.o2 = sq(al) * D * wmd
         + (m - al) * (g2 / th + al) * wmd / th * rx(-th * iD) * em1(th * D)
         + al * (m - al) * D / th * rx(-th * i1D) * e_wmd
         + g2 * al / (2.0L * th * sq(th)) * em1(th * D) * rx(-th * kd) * e_wmd
         + M2 / sq(th) * rx(-2.0L * th * iD) * em1(th * D) * rx(th * D) * e_wmd;
  p.o3 = sq(al) * D * wmd
         + (m - al) * (g2 / th + al) * D / th * rx(-th * i1D) * e_wmd
         + al * (m - al) * wmd / th * rx(-th * iD + th * kd) * em1(th * D)
         + g2 * al / (2.0L * th * sq(th)) * rx(th * D) * e_wmd * rx(-th * kd) * one_m_emx(th * D)
         + M2 / sq(th) * rx(-2.0L * th * iD + th * kd) * em1(th * D) * rx(th * D) * e_wmd;
  p.o4 = window_second_moment(c, i - 1, c.k - c.lam);
  return p;
}

enum class CrossRoute { Auto, Disjoint, Overlapping };

// Mean of the estimator, assembled increment by increment from the window
// second moments and the regime-matched cross moments.
inline real assembled_mean_psrv(const Kernel& c, CrossRoute route = CrossRoute::Auto) {
  const bool use_overlap = (route == CrossRoute::Auto) ? c.overlap()
                                                       : (route == CrossRoute::Overlapping);
  real tot = 0.0L;
  for (long long i = 1; i <= c.msteps; ++i) {
    tot += window_second_moment(c, i, c.k);
    tot += window_second_moment(c, i - 1, c.k);
    const real cross = use_overlap ? cross_overlap_pieces(c, i).sum() : cross_no_overlap(c, i);
    tot -= 2.0L * cross;
  }
  return tot / sq(c.w());
}

// Window factor multiplying the level contribution; tends to 1 as the mesh
// shrinks along admissible rates.
inline real factor_A(const Kernel& c) {
  const real th = c.theta, d = c.delta;
  const real kd = c.w(), D = c.big_delta();
  const real kpr = static_cast<real>(c.k);
  const real omd = one_m_emx(th * d);
  const real dec = decay3(th * d);
  return 1.0L / sq(kd) / D *
         (2.0L / th * kpr *
              (3.0L / (2.0L * sq(th)) * sq(omd)
               + 3.0L / th * (dec / th)
               + 3.0L / th * d * (1.0L + 2.0L * rx(-th * d))
               + 3.0L / (2.0L * sq(th)) * (em1(-2.0L * th * d) + 4.0L * em1(-th * d)))
          + 2.0L / (th * sq(th)) * (em1(-th * kd) - kpr * em1(-th * d))
          - 1.0L / (th * sq(th)) * rx(-th * D) * (em1(th * kd) + em1(-th * kd)));
}

// Window factor multiplying the anchor-offset contribution; tends to 1.
inline real factor_B(const Kernel& c) {
  const real th = c.theta, d = c.delta;
  const real kd = c.w(), D = c.big_delta();
  const real kpr = static_cast<real>(c.k);
  const real omd = one_m_emx(th * d);
  const real dec = decay3(th * d);
  return 1.0L / sq(kd) * rx(-th * D) / one_m_emx(th * D) *
         ((1.0L + rx(th * D)) *
              (3.0L / sq(th) * em1(th * kd) * omd
               + 3.0L / th * em1(th * kd) / omd * (dec / th)
               + 2.0L / th * d / em1(th * d) * (em1(th * kd) - kpr * em1(th * d)))
          - 2.0L / th * kd * em1(th * kd));
}

// Dispersion/kurtosis block; tends to 0 along admissible rates.
inline real term_C(const Kernel& c) {
  const real th = c.theta, al = c.alpha, d = c.delta;
  const real kd = c.w(), D = c.big_delta(), h = c.h(), m = c.m;
  const real M2 = c.m2t();
  const real kpr = static_cast<real>(c.k);
  const real omd = one_m_emx(th * d);
  return 1.0L / sq(kd) *
         (rx(-2.0L * th * D) * one_m_emx(2.0L * th * h) / one_m_emx(2.0L * th * D) / sq(th) * M2 *
              ((1.0L + rx(2.0L * th * D)) / one_m_emx(2.0L * th * d) *
                   (3.0L * em1(2.0L * th * kd) * sq(omd)
                    + 2.0L * omd
                    + 2.0L * rx(th * kd) * em1(-2.0L * th * d)
                    + 2.0L * rx(2.0L * th * kd - th * d) * omd)
               - 2.0L * rx(th * D) * sq(em1(th * kd)))
          + (6.0L * sq(al) * sq(d) * kpr - 2.0L * sq(al) * kpr * sq(d)) * h / D
          + rx(-th * D) * one_m_emx(th * h) / one_m_emx(th * D) *
                ((6.0L * al / th * d * (m - al) * em1(th * kd)
                  + 2.0L * al / th * d * (m - al) / em1(th * d) *
                        ((em1(th * kd) - kpr * em1(th * d))
                         + kpr * rx(th * kd) * em1(th * d)
                         - rx(th * d) * em1(th * kd))) * (1.0L + rx(th * D))
                 - 2.0L * al / th * kd * (m - al) * (1.0L + rx(th * D)) * em1(th * kd)));
}

// Overlap adjustment, present only when the window exceeds the step. Every
// channel carries a factor that vanishes exactly at window == step.
inline real term_O(const Kernel& c) {
  const real th = c.theta, al = c.alpha, g2 = c.gamma2, d = c.delta;
  const real kd = c.w(), D = c.big_delta(), h = c.h(), m = c.m;
  const real M2 = c.m2t();
  const real kpr = static_cast<real>(c.k);

  // level channel of the exact overlap adjustment
  const real T1 = 4.0L * sq(al) * h * d *
                  (static_cast<real>(c.lam - c.k) / static_cast<real>(c.lam));
  const real T2 = g2 * al * h / (th * sq(th)) * rx(-th * (d + kd + D)) / D *
                  (rx(th * d) - 2.0L * rx(th * d * (1.0L + kpr)) + rx(th * d * (1.0L + 2.0L * kpr))
                   - 2.0L * rx(th * (d + D)) - 4.0L * rx(th * (kd + D)) * kpr
                   + rx(th * (d + kd + D)) * (2.0L + kpr * (4.0L - 6.0L * th * d)));
  const real T3 = 2.0L * g2 * al * h / (th * sq(th)) * rx(-th * d * (1.0L + kpr)) / D *
                  (rx(th * d) + 2.0L * rx(th * kd) * kpr
                   - rx(th * d * (1.0L + kpr)) * (1.0L - kpr * (3.0L * th * d - 2.0L)));
  const real T4 = -g2 * al * h / (th * sq(th)) * rx(-th * (1.0L + 2.0L * kpr) * d) / (d * D) *
                  (-4.0L * rx(2.0L * th * kd) * (-em1(th * d)) * D
                   + 6.0L * th * rx(th * d * (1.0L + 2.0L * kpr)) * kpr * sq(d)
                   + d * (rx(th * (d + kd - D)) - 2.0L * rx(th * (d + 2.0L * kd - D)) + rx(th * (d + kd + D))
                          + 4.0L * rx(2.0L * th * kd) * kpr
                          - 2.0L * rx(th * d * (1.0L + 2.0L * kpr)) * (2.0L * kpr + 3.0L * th * D)));
  // dispersion channel: both addends carry the anchor second-moment factor
  const real A1 = -2.0L * rx(th * D) * em1(th * kd);
  const real A2 = (-3.0L + rx(th * d) - rx(th * kd) + 3.0L * rx(th * d * (1.0L + kpr))) *
                  (1.0L + rx(2.0L * th * D)) / (1.0L + rx(th * d));
  const real T5 = -(1.0L / (sq(th) * one_m_emx(2.0L * th * D))) * rx(-2.0L * th * D) *
                  one_m_emx(2.0L * th * h) * em1(th * kd) * (A1 + A2) * M2;
  // anchor-offset channel; the (X - y) differences vanish exactly at
  // window == step
  const real wmd = d * static_cast<real>(c.k - c.lam);
  const real XmY = rx(th * D) * em1(th * wmd);  // e^{th W} - e^{th Delta}
  const real R = -8.0L * al * d / th * XmY
                 + 2.0L * g2 / sq(th) * (wmd * (rx(th * kd) + rx(th * D))
                                         - 6.0L / th * XmY
                                         + 4.0L * d * XmY / em1(th * d));
  const real T6 = (m - al) * one_m_emx(th * h) / em1(th * D) * R;
  const real T7 = 0.0L;
  const real T8 = -2.0L * th * M2 / (2.0L * th * sq(th) * (1.0L + rx(th * d)) * em1(2.0L * th * D)) *
                  (one_m_emx(2.0L * th * h) * em1(th * kd) *
                   (3.0L - rx(th * d) + rx(th * kd) - 3.0L * rx(th * (1.0L + kpr) * d)) *
                   (1.0L + rx(2.0L * th * D)));
  const real T9 = -(2.0L * th * M2) / (th * sq(th)) * one_m_emx(2.0L * th * h) /
                  ((1.0L + rx(th * d)) * em1(2.0L * th * D)) *
                  (-2.0L * rx(2.0L * th * kd) + 2.0L * rx(th * (1.0L + 2.0L * kpr) * d)
                   + rx(th * D) + 2.0L * rx(2.0L * th * D) + rx(th * (d + D))
                   - 2.0L * rx(th * (kd + D)) - 2.0L * rx(th * (d + kd + D))
                   + rx(th * (2.0L * kd + D)) + rx(th * (d + 2.0L * kd + D))
                   - 2.0L * rx(th * (d + 2.0L * D)));
  return (T1 + T2 + T3 + T4 + T5 + T6 + T7 + T8 + T9) / sq(kd);
}

// Mean of the estimator via the compact route.
inline real compact_mean_psrv(const Kernel& c) {
  const real th = c.theta;
  real v = c.gamma2 * c.alpha * c.h() * factor_A(c)
           + c.gamma2 * (c.m - c.alpha) * one_m_emx(th * c.h()) / th * factor_B(c)
           + term_C(c);
  if (c.overlap()) v += term_O(c);
  return v;
}

// Observation-noise inflation of the estimator mean, no-overlap regime.
inline real noise_term_no_overlap(const Kernel& c, real V, real Q) {
  const real th = c.theta, al = c.alpha, m = c.m, d = c.delta;
  const real kd = c.w(), D = c.big_delta(), h = c.h();
  const real kpr = static_cast<real>(c.k);
  const real lead = (4.0L * (Q + sq(V)) + 16.0L * al * V * d) * h / (kpr * sq(d) * D);
  const real sec = 8.0L / th * V * (al - m) * one_m_emx(th * h) *
                   (1.0L + rx(-th * D)) * (-em1(th * kd)) /
                   (one_m_emx(th * D) * sq(kpr) * sq(d));
  return lead + sec;
}

// Observation-noise inflation of the estimator mean, overlap regime.
inline real noise_term_overlap(const Kernel& c, real V, real Q) {
  const real th = c.theta, al = c.alpha, m = c.m, d = c.delta;
  const real kd = c.w(), h = c.h();
  const real kpr = static_cast<real>(c.k);
  const real lead = (4.0L * (Q + sq(V)) + 16.0L * al * V * d) * h / (sq(kpr) * d * sq(d));
  const real sec = -8.0L / th * V * (al - m) * one_m_emx(th * h) *
                   (1.0L + rx(th * kd)) / (sq(kpr) * sq(d));
  return lead + sec;
}

}  // namespace vov::fml
