#include "platelab/counterexample.hpp"
#include "platelab/errors.hpp"
#include "platelab/potential_solver.hpp"
#include "platelab/version.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace platelab {

namespace {

const Rational kZero(0), kOne(1), kTwo(2);

double rpow(double x, const Rational& e) { return std::pow(x, e.to_double()); }

// d/2 - d/r
Rational decay_exponent(int d, const LebesgueExponent& r) { return Rational(d) * (Rational(1, 2) - r.reciprocal()); }

} // namespace

Rational admissibility_gap(const Rational& alpha, const Rational& beta, const Rational& s, int d) {
  if (d < 1) throw IndexError("dimension must be positive");
  if (alpha < kOne) throw IndexError("alpha must be >= 1, got " + alpha.str());
  if (!(beta > kOne)) throw IndexError("beta must be > 1, got " + beta.str());
  const Rational g0 = s + kTwo - (kTwo / alpha + Rational(d) / beta);
  if (g0.is_zero())
    throw IndexError("2/alpha + d/beta = s + 2: admissible class, no counterexample exists");
  return g0;
}

Powers choose_powers(const Rational& g0, const Rational& margin) {
  if (!(g0 > kZero)) throw IndexError("gap must be positive, got " + g0.str());
  if (!(margin > kZero)) throw DomainError("margin must be positive (strict inequalities a > b > 2/g0)");
  const Rational b = kTwo / g0 * (kOne + margin);
  return {b * (kOne + margin), b};
}

Rational potential_term_exponent(int d, const Rational& s, const Rational& alpha, const Rational& beta,
                                 const Rational& a, const Rational& b) {
  return a / alpha - b / kTwo * (s + kTwo - Rational(d) / beta);
}

Rational ratio_growth_exponent(int d, const Rational& a, const Rational& b, const LebesgueExponent& q,
                               const LebesgueExponent& r) {
  return a * q.reciprocal() - b / kTwo * decay_exponent(d, r);
}

double ratio_value(long k, int d, double a, double b, const LebesgueExponent& q, const LebesgueExponent& r) {
  const double eps = std::pow(static_cast<double>(k), -0.5 * b);
  const double len = std::pow(static_cast<double>(k), a);
  return rpow(eps, decay_exponent(d, r)) * rpow(len, q.reciprocal());
}

BlowupSchedule::BlowupSchedule(int d, Rational s, Rational alpha, Rational beta, Rational a, Rational b, Pair pair)
    : d_(d), s_(s), alpha_(alpha), beta_(beta), a_(a), b_(b), pair_(pair) {
  if (s < kTwo || !(s < Rational(d)))
    throw IndexError("schedule needs s in [2, d), got s = " + s.str() + ", d = " + std::to_string(d));
  gap_ = admissibility_gap(alpha, beta, s, d);
  if (!(gap_ > kZero))
    throw IndexError("gap " + gap_.str() + " <= 0: the schedule covers only 2/alpha + d/beta < s + 2");
  if (!(b > kTwo / gap_)) throw IndexError("need b > 2/g0 = " + (kTwo / gap_).str() + ", got b = " + b.str());
  if (!(a > b)) throw IndexError("need a > b, got a = " + a.str() + ", b = " + b.str());
  const Verdict v = is_admissible(pair.q, pair.r, d);
  if (!v) throw IndexError("pair (" + pair.q.str() + ", " + pair.r.str() + ") is not admissible: " + v.diagnostic);
  if (pair.q.is_infinite())
    throw IndexError("pair (inf, 2) carries no time integrability: eps_k^{d/2-d/r} = 1 and the ratio does not grow");
}

BlowupSchedule BlowupSchedule::with_margin(int d, Rational s, Rational alpha, Rational beta, Rational margin,
                                           Pair pair) {
  const Powers p = choose_powers(admissibility_gap(alpha, beta, s, d), margin);
  return BlowupSchedule(d, s, alpha, beta, p.a, p.b, pair);
}

double BlowupSchedule::epsilon(long k) const {
  if (k < 1) throw DomainError("schedule index starts at 1");
  return std::pow(static_cast<double>(k), -0.5 * b_.to_double());
}

double BlowupSchedule::interval(long k) const {
  if (k < 1) throw DomainError("schedule index starts at 1");
  return std::pow(static_cast<double>(k), a_.to_double());
}

double BlowupSchedule::start_time(long k) const {
  if (k < 1) throw DomainError("schedule index starts at 1");
  double t = 0.0;
  for (long j = 1; j < k; ++j) t += interval(j);
  return t;
}

PartialSumReport potential_norm_partial_sums(const BlowupSchedule& sched, double W_norm, long K) {
  if (K < 1) throw DomainError("need at least one term");
  PartialSumReport rep;
  rep.exponent = potential_term_exponent(sched.d(), sched.s(), sched.alpha(), sched.beta(), sched.a(), sched.b());
  rep.convergent = rep.exponent < Rational(-1);
  const double e = rep.exponent.to_double();
  rep.partial_sums.reserve(K);
  double sum = 0.0, comp = 0.0; // Neumaier summation
  for (long k = 1; k <= K; ++k) {
    const double term = W_norm * std::pow(static_cast<double>(k), e);
    const double t = sum + term;
    comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    rep.partial_sums.push_back(sum + comp);
  }
  for (long k = 10; 2 * k <= K; k *= 10) {
    rep.cauchy_K.push_back(k);
    rep.cauchy_gap.push_back(rep.partial_sums[2 * k - 1] - rep.partial_sums[k - 1]);
  }
  return rep;
}

RatioReport blowup_ratio_sequence(const BlowupSchedule& sched, long k_lo, long k_hi, int samples) {
  if (k_lo < 1 || k_hi <= k_lo || samples < 2) throw DomainError("invalid fit range");
  RatioReport rep;
  const Pair& p = sched.pair();
  const int d = sched.d();
  const double a = sched.a().to_double(), b = sched.b().to_double();
  rep.predicted = ratio_growth_exponent(d, sched.a(), sched.b(), p.q, p.r);
  rep.increasing = true;
  double prev = ratio_value(2, d, a, b, p.q, p.r);
  for (long k = 3; k <= k_hi; ++k) {
    const double cur = ratio_value(k, d, a, b, p.q, p.r);
    if (!(cur > prev)) rep.increasing = false;
    prev = cur;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long last = -1;
  for (int i = 0; i < samples; ++i) {
    const double lk = std::log(static_cast<double>(k_lo)) +
                      (std::log(static_cast<double>(k_hi)) - std::log(static_cast<double>(k_lo))) * i / (samples - 1);
    const long k = std::lround(std::exp(lk));
    if (k == last) continue;
    last = k;
    const double R = ratio_value(k, d, a, b, p.q, p.r);
    rep.ks.push_back(k);
    rep.values.push_back(R);
    const double x = std::log(static_cast<double>(k)), y = std::log(R);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double N = static_cast<double>(rep.ks.size());
  rep.fitted = (N * sxy - sx * sy) / (N * sxx - sx * sx);
  const double pred = rep.predicted.to_double();
  rep.relative_error = pred != 0.0 ? std::fabs(rep.fitted - pred) / std::fabs(pred) : std::fabs(rep.fitted);
  return rep;
}

double potential_profile_norm(const GroundState& gs, const Rational& s, const Rational& beta, int n, double L) {
  const Grid g(gs.d, n, L);
  const Field W = Field::sample(g, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return cplx(gs.W_profile.value(std::sqrt(r2)));
  });
  return sobolev_seminorm(W, (s - kTwo).to_double(), LebesgueExponent(beta));
}

CrossCheckReport numerical_cross_check(const BlowupSchedule& sched, const GroundState& gs, long k,
                                       const CrossCheckOptions& opts) {
  const int d = sched.d();
  if (gs.d != d) throw DomainError("ground state dimension does not match the schedule");
  const double s = sched.s().to_double();
  const Pair& pair = sched.pair();
  const LebesgueExponent two(Rational(2));

  CrossCheckReport rep;
  rep.k = k;
  rep.eps = sched.epsilon(k);
  rep.t_start = sched.start_time(k);
  rep.length = sched.interval(k);
  const double eps = rep.eps;

  // Unscaled profile norms; the scaled grid below is an exact dilation of this one.
  const Grid ref(d, opts.n, opts.box);
  const Field v = standing_wave(gs, 1.0, 0.0, ref, opts.tail_tol);
  const double v_wsr = sobolev_seminorm(v, s, pair.r);
  const double v_data = sobolev_seminorm(v, s, two) + sobolev_seminorm(v, s - 2.0, two);
  rep.denominator_analytic = std::pow(eps, s - 0.5 * d) * v_data;
  rep.analytic = v_wsr / v_data * ratio_value(k, d, sched.a().to_double(), sched.b().to_double(), pair.q, pair.r);

  const Grid g(d, opts.n, opts.box / eps);
  const Field u0 = standing_wave(gs, eps, 0.0, g, opts.tail_tol);
  const Field u1 = cplx(0.0, eps * eps) * u0;
  const Field V = rescaled_potential(gs.W_profile, eps, g);
  const ClassIndices cls{sched.alpha(), sched.beta(), sched.s()};
  const TimeGrid I(rep.length, opts.m);
  PlateProblem problem{u0, u1, std::nullopt,
                       PotentialSpec::piecewise({rep.t_start, rep.t_start + rep.length}, {V}, cls), I};
  SolverOptions so;
  so.tol = opts.solver_tol;
  so.time_offset = rep.t_start;
  const SolveReport sol = picard_solve(problem, so);

  const double n0 = lebesgue_norm(u0, two);
  const double h0 = sobolev_seminorm(u0, s, two);
  std::vector<double> wsr;
  wsr.reserve(I.m());
  for (int j = 0; j < I.m(); ++j) {
    const Field& u = sol.trajectory.fields[j];
    const Field exact = standing_wave(gs, eps, I.node(j), g, opts.tail_tol);
    rep.fidelity_error = std::max(rep.fidelity_error, lebesgue_norm(to_rep(u, Rep::Space) - exact, two) / n0);
    rep.hs_drift = std::max(rep.hs_drift, std::fabs(sobolev_seminorm(u, s, two) / h0 - 1.0));
    wsr.push_back(sobolev_seminorm(u, s, pair.r));
  }
  rep.denominator = h0 + sobolev_seminorm(u1, s - 2.0, two);
  rep.quotient = mixed_norm_from_values(I, wsr, pair.q) / rep.denominator;

  rep.fidelity_ok = rep.fidelity_error < opts.fidelity_tol;
  rep.constancy_ok = rep.hs_drift < opts.constancy_tol;
  rep.bracket_ok = rep.quotient >= (1.0 - opts.bracket_tol) * rep.analytic &&
                   rep.quotient <= (1.0 + opts.bracket_tol) * rep.analytic;
  rep.denominator_ok = std::fabs(rep.denominator / rep.denominator_analytic - 1.0) < opts.bracket_tol;
  return rep;
}

void write_schedule_csv(std::ostream& os, const BlowupSchedule& sched, double W_norm, long K) {
  write_csv_preamble(os, {"k", "eps_k", "T_k", "term_k", "S_k", "R_k"});
  const PartialSumReport sums = potential_norm_partial_sums(sched, W_norm, K);
  const double e = sums.exponent.to_double();
  const Pair& p = sched.pair();
  double T = 0.0;
  os << std::setprecision(17);
  for (long k = 1; k <= K; ++k) {
    os << k << ',' << sched.epsilon(k) << ',' << T << ',' << W_norm * std::pow(static_cast<double>(k), e) << ','
       << sums.partial_sums[k - 1] << ','
       << ratio_value(k, sched.d(), sched.a().to_double(), sched.b().to_double(), p.q, p.r) << '\n';
    T += sched.interval(k);
  }
}

} // namespace platelab
