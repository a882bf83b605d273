#pragma once

#include "platelab/estimates.hpp"
#include "platelab/ground_state.hpp"
#include "platelab/rational.hpp"

#include <iosfwd>
#include <vector>

namespace platelab {

/// g0 = s + 2 - (2/alpha + d/beta). Throws IndexError when g0 = 0 (the class
/// is admissible and no counterexample exists) or the indices are out of range.
Rational admissibility_gap(const Rational& alpha, const Rational& beta, const Rational& s, int d);

struct Powers {
  Rational a, b;
};
/// b = (2/g0)(1 + margin), a = b(1 + margin); margin must be positive.
Powers choose_powers(const Rational& g0, const Rational& margin = Rational(1, 4));

/// Exponent of k in eps_k^{s+2-d/beta} (T_{k+1} - T_k)^{1/alpha}:
/// a/alpha - (b/2)(s + 2 - d/beta).
Rational potential_term_exponent(int d, const Rational& s, const Rational& alpha, const Rational& beta,
                                 const Rational& a, const Rational& b);
/// Exponent of k in R_k = eps_k^{d/2-d/r} (T_{k+1} - T_k)^{1/q}, exact.
Rational ratio_growth_exponent(int d, const Rational& a, const Rational& b, const LebesgueExponent& q,
                               const LebesgueExponent& r);
/// R_k for arbitrary powers (no schedule invariants checked).
double ratio_value(long k, int d, double a, double b, const LebesgueExponent& q, const LebesgueExponent& r);

/// eps_k = k^{-b/2}, T_1 = 0, T_{k+1} = T_k + k^a, k >= 1.
class BlowupSchedule {
public:
  BlowupSchedule(int d, Rational s, Rational alpha, Rational beta, Rational a, Rational b, Pair pair);
  /// Schedule with powers from choose_powers(gap, margin).
  static BlowupSchedule with_margin(int d, Rational s, Rational alpha, Rational beta, Rational margin, Pair pair);

  int d() const noexcept { return d_; }
  const Rational& s() const noexcept { return s_; }
  const Rational& alpha() const noexcept { return alpha_; }
  const Rational& beta() const noexcept { return beta_; }
  const Rational& a() const noexcept { return a_; }
  const Rational& b() const noexcept { return b_; }
  const Rational& gap() const noexcept { return gap_; }
  const Pair& pair() const noexcept { return pair_; }

  double epsilon(long k) const;
  /// T_{k+1} - T_k = k^a.
  double interval(long k) const;
  /// T_k by direct summation.
  double start_time(long k) const;

private:
  int d_;
  Rational s_, alpha_, beta_, a_, b_, gap_;
  Pair pair_;
};

struct PartialSumReport {
  Rational exponent;
  bool convergent = false;
  std::vector<double> partial_sums; ///< S_1 .. S_K
  std::vector<long> cauchy_K;       ///< K = 10, 100, ... with 2K <= count
  std::vector<double> cauchy_gap;   ///< S_{2K} - S_K
};
/// S_K = sum_{k=1}^K W_norm eps_k^{s+2-d/beta} (T_{k+1}-T_k)^{1/alpha}.
PartialSumReport potential_norm_partial_sums(const BlowupSchedule& sched, double W_norm, long K);

struct RatioReport {
  Rational predicted; ///< (a - b)/q
  double fitted = 0.0;
  double relative_error = 0.0;
  bool increasing = false; ///< R_k strictly increasing on [2, k_hi]
  std::vector<long> ks;
  std::vector<double> values;
};
/// R_k with a least-squares log-log slope over log-spaced k in [k_lo, k_hi].
RatioReport blowup_ratio_sequence(const BlowupSchedule& sched, long k_lo = 100, long k_hi = 100000, int samples = 200);

/// ||W||_{W^{s-2, beta}} on a box grid (homogeneous seminorm).
double potential_profile_norm(const GroundState& gs, const Rational& s, const Rational& beta, int n = 64,
                              double L = 13.0);

struct CrossCheckOptions {
  int n = 64;
  double box = 13.0;      ///< L = box / eps_k
  int m = 65;             ///< time nodes on [T_k, T_{k+1}]
  double tail_tol = 1e-4; ///< |v| at the box edge
  double solver_tol = 1e-10;
  double fidelity_tol = 1e-3;
  double constancy_tol = 1e-2;
  double bracket_tol = 1e-2;
};

struct CrossCheckReport {
  long k = 0;
  double eps = 0.0, t_start = 0.0, length = 0.0;
  double fidelity_error = 0.0; ///< max_t ||u - e^{i eps^2 t} v(eps .)||_2 / ||v(eps .)||_2
  double hs_drift = 0.0;       ///< max_t | ||u(t)||_{H^s} / ||u(0)||_{H^s} - 1 |
  double quotient = 0.0;       ///< measured numerator / denominator
  double analytic = 0.0;       ///< C R_k with C = ||v||_{W^{s,r}} / (||v||_{H^s} + ||v||_{H^{s-2}})
  double denominator = 0.0;
  double denominator_analytic = 0.0; ///< eps^{s-d/2} (||v||_{H^s} + ||v||_{H^{s-2}})
  bool fidelity_ok = false, constancy_ok = false, bracket_ok = false, denominator_ok = false;
  bool ok() const noexcept { return fidelity_ok && constancy_ok && bracket_ok && denominator_ok; }
};
/// Evolves the standing wave on [T_k, T_{k+1}] under V = eps_k^4 W(eps_k .)
/// with the potential solver and certifies the three properties.
CrossCheckReport numerical_cross_check(const BlowupSchedule& sched, const GroundState& gs, long k,
                                       const CrossCheckOptions& opts = {});

/// Rows (k, eps_k, T_k, term_k, S_k, R_k) for k = 1 .. K.
void write_schedule_csv(std::ostream& os, const BlowupSchedule& sched, double W_norm, long K);

} // namespace platelab
