// Acceptance runner: one PASS/FAIL line per criterion. `--only N` runs one.
#include "platelab/counterexample.hpp"
#include "platelab/errors.hpp"
#include "platelab/estimates.hpp"
#include "platelab/ground_state.hpp"
#include "platelab/kato_ponce.hpp"
#include "platelab/potential_solver.hpp"
#include "platelab/propagators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace platelab;

namespace {

const LebesgueExponent kL2(Rational(2));

LebesgueExponent ex(const char* s) { return LebesgueExponent::parse(s); }

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [violated: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const Field& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

Field gaussian(const Grid& g, double w, double k = 0.0) {
  return Field::sample(g, [w, k](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return std::exp(-r2 / (2 * w * w)) * std::polar(1.0, k * x[0]);
  });
}

// 1. closed-form 1-D profile
void newton_identities(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const NewtonResiduals r = newton_residuals_1d(2048, 40.0);
  const double t = seconds_since(t0);
  o.detail << "second-order " << r.second_order << ", fourth-order " << r.fourth_order << ", " << t << " s";
  o.require(r.second_order < 1e-8, "second-order residual < 1e-8");
  o.require(r.fourth_order < 1e-6, "fourth-order residual < 1e-6");
  o.require(t < 1.0, "runtime < 1 s");
}

// 2. d = 3 ground state
void ground_state_d3(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const GroundState gs = find_ground_state(3);
  const double bracket = gs.bracket_hi - gs.bracket_lo;
  const double so = second_order_residual(gs, gs.r_match);
  const BLReport bl = check_bl_conditions(3);
  const FourthOrderReport fo = verify_fourth_order(gs);
  const DecayFit fit = fit_decay(gs.profile, 5.0, 20.0);
  const double t = seconds_since(t0);
  o.detail << "sigma* " << gs.sigma_star << ", bracket " << bracket << ", second-order " << so
           << ", fourth-order fd/intermediate/spectral " << fo.fd_residual << '/' << fo.intermediate_residual << '/'
           << fo.spectral_residual << ", decay rate " << fit.delta << ", " << t << " s";
  o.require(bracket < 1e-12, "bracket < 1e-12");
  o.require(so < 1e-6, "second-order residual < 1e-6");
  o.require(bl.all_pass(), "Berestycki-Lions report all-pass");
  o.require(fo.pass(1e-4), "biharmonic identity residual < 1e-4");
  o.require(fit.delta >= 0.9 && fit.delta <= 1.1, "decay rate in [0.9, 1.1]");
  o.require(t < 30.0, "runtime < 30 s");
}

// 3. spectral propagators
void propagator_exactness(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid g(2, 64, 8.0);
  const Field u0 = gaussian(g, 1.0, 1.0), u1 = cplx(0.4) * gaussian(g, 1.5);
  const double n0 = lebesgue_norm(u0, kL2);
  double l2 = 0.0;
  for (double t = -100.0; t <= 100.0; t += 2.5)
    l2 = std::max(l2, std::fabs(lebesgue_norm(inverse_transform(schrodinger_flow(forward_transform(u0), t)), kL2) / n0 - 1.0));
  const double scale = max_abs(u0);
  double group = 0.0, parity = 0.0;
  for (auto [s, t] : {std::pair{0.3, 1.1}, std::pair{-2.0, 5.5}, std::pair{7.0, -3.25}}) {
    group = std::max(group, max_abs_diff(schrodinger_flow(schrodinger_flow(u0, s), t), schrodinger_flow(u0, s + t)) / scale);
    const PlateState a = free_plate_solution(u0, u1, s);
    const PlateState b = free_plate_solution(a.u, a.ut, t);
    const PlateState c = free_plate_solution(u0, u1, s + t);
    group = std::max(group, max_abs_diff(b.u, c.u) / max_abs(c.u));
    group = std::max(group, max_abs_diff(b.ut, c.ut) / max_abs(c.ut));
    parity = std::max(parity, max_abs_diff(plate_cos(u0, t), plate_cos(u0, -t)) / scale);
    const Field sp = plate_sinc(u0, t), sm = plate_sinc(u0, -t);
    parity = std::max(parity, max_abs(sp + sm) / max_abs(sp));
  }
  // second difference of the free plate against -Delta^2 u
  const Grid g1(1, 128, 10.0);
  const Field v0 = gaussian(g1, 1.0), v1 = cplx(0.3) * gaussian(g1, 1.0);
  const double tc = 0.7;
  const Field uc = free_plate_solution(v0, v1, tc).u;
  const Field bil = apply_radial_multiplier(uc, [](double k2) { return cplx(k2 * k2); });
  std::vector<double> res;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const Field up = free_plate_solution(v0, v1, tc + dt).u, um = free_plate_solution(v0, v1, tc - dt).u;
    double r = 0.0;
    for (std::size_t i = 0; i < uc.size(); ++i) r = std::max(r, std::abs((up[i] - 2.0 * uc[i] + um[i]) / (dt * dt) + bil[i]));
    res.push_back(r);
  }
  const double order = std::log2(res[1] / res[2]);
  const double t = seconds_since(t0);
  o.detail << "L2 drift " << l2 << ", group law " << group << ", parity " << parity << ", second-difference order "
           << std::log2(res[0] / res[1]) << ", " << order << ", " << t << " s";
  o.require(l2 < 1e-12, "L2 conservation to 1e-12");
  o.require(group < 1e-12, "group law to 1e-12");
  o.require(parity < 1e-12, "parity to 1e-12");
  o.require(std::fabs(order - 2.0) < 0.05 && std::fabs(std::log2(res[0] / res[1]) - 2.0) < 0.05, "O(dt^2) residual");
  o.require(t < 10.0, "runtime < 10 s");
}

// 4. dispersive decay
void dispersive_decay(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double r2 = 0.0;
  for (int d : {1, 2, 3}) {
    const Grid g(d, d == 3 ? 32 : 64, 8.0);
    const Field u = gaussian(g, 1.0, 0.5);
    for (double t : {0.5, 2.0, 6.4}) r2 = std::max(r2, std::fabs(fixed_time_ratio(u, t, kL2) - 1.0));
  }
  // d = 1, r = inf against the periodized closed form on [0.5, L^2/10]
  const Grid g(1, 256, 20.0);
  const double w = 1.0;
  const Field u0 = gaussian(g, w);
  const double l1 = lebesgue_norm(u0, ex("1"));
  std::vector<double> times;
  const double t_hi = g.L() * g.L() / 10.0;
  for (int i = 0; i < 80; ++i) times.push_back(0.5 + (t_hi - 0.5) * i / 79.0);
  const std::vector<double> ratio = dispersive_sweep(u0, times, LebesgueExponent::infinity());
  double oracle_err = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double sup = 0.0;
    for (int j = 0; j < g.n(); ++j) {
      const double x = g.coordinate(j);
      sup = std::max(sup, std::abs(periodized_gaussian_flow(std::span<const double>(&x, 1), w, times[i], g.L())));
    }
    const double oracle = sup * std::sqrt(times[i]) / l1;
    oracle_err = std::max(oracle_err, std::fabs(ratio[i] / oracle - 1.0));
  }
  // plateau on a large box: t in {1..50}, variation beyond t = 10
  const Grid big(1, 2048, 300.0);
  std::vector<double> ts;
  for (int t = 10; t <= 50; ++t) ts.push_back(t);
  const std::vector<double> plateau = dispersive_sweep(gaussian(big, 1.0), ts, LebesgueExponent::infinity());
  const auto [lo, hi] = std::minmax_element(plateau.begin(), plateau.end());
  const double variation = (*hi - *lo) / *lo;
  const double t = seconds_since(t0);
  o.detail << "|ratio(r=2) - 1| " << r2 << ", oracle relative error " << oracle_err << " on [0.5, " << t_hi
           << "], plateau variation " << variation << ", " << t << " s";
  o.require(r2 < 1e-12, "fixed-time ratio at r = 2 equals 1 to 1e-12");
  o.require(oracle_err < 1e-6, "oracle agreement to 1e-6");
  o.require(variation < 0.1, "plateau variation < 10%");
  o.require(t < 10.0, "runtime < 10 s");
}

// 5. Strichartz boundedness on separable data
void strichartz_boundedness(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const int d = 3;
  const Grid axis(1, 12288, 1400.0);
  const TimeGrid I(100.0, 2001);
  const int n10 = 201; // nodes of [0, 10]
  const TimeGrid I10 = I.prefix(n10);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto member = [&]() {
    const double w = std::exp(std::log(1.0) + (std::log(1.5) - std::log(1.0)) * unit(rng));
    SeparableData sep;
    for (int a = 0; a < d; ++a) {
      const double c = (2 * unit(rng) - 1) * 2.0, k = (2 * unit(rng) - 1) * 0.5;
      sep.factors.push_back(Field::sample(axis, [=](std::span<const double> x) {
        return std::exp(-(x[0] - c) * (x[0] - c) / (2 * w * w)) * std::polar(1.0, k * x[0]);
      }));
    }
    return std::pair{w, sep};
  };
  const std::vector<Pair> pairs{{ex("inf"), ex("2")}, {ex("2"), ex("6")}, {ex("4"), ex("3")}};
  std::vector<LebesgueExponent> rs;
  for (const Pair& p : pairs) rs.push_back(p.r);
  double worst = 0.0;
  for (int m = 0; m < 50; ++m) {
    const auto [w, sep] = member();
    const auto norms = separable_flow_norms(sep, rs, I);
    const double den = separable_l2_norm(sep);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (!is_admissible(pairs[k].q, pairs[k].r, d)) throw IndexError("internal: pair not admissible");
      const double q100 = mixed_norm_from_values(I, norms[k], pairs[k].q) / den;
      const double q10 = mixed_norm_from_values(I10, std::span<const double>(norms[k].data(), n10), pairs[k].q) / den;
      worst = std::max(worst, q100 / q10 - 1.0);
    }
  }
  // deliberately non-admissible (q, r) = (2, 11/5): 2/q + d/r = 26/11 > d/2
  const Pair bad{ex("2"), ex("11/5")};
  // ||u(t)||_r ~ t^{-d(1/2-1/r)}, so the quotient grows like T^{1/q - d(1/2-1/r)}
  const double predicted = bad.q.reciprocal().to_double() - d * (0.5 - bad.r.reciprocal().to_double());
  double exp_lo = 1e9, exp_hi = -1e9;
  for (int m = 0; m < 5; ++m) {
    const auto [w, sep] = member();
    const auto norms = separable_flow_norms(sep, {bad.r}, I);
    const double q100 = mixed_norm_from_values(I, norms[0], bad.q);
    const double q10 = mixed_norm_from_values(I10, std::span<const double>(norms[0].data(), n10), bad.q);
    const double measured = std::log(q100 / q10) / std::log(10.0);
    exp_lo = std::min(exp_lo, measured);
    exp_hi = std::max(exp_hi, measured);
  }
  const double rel = std::max(std::fabs(exp_lo / predicted - 1.0), std::fabs(exp_hi / predicted - 1.0));
  const double t = seconds_since(t0);
  o.detail << "max growth T=10 -> 100 over 50 members x 3 pairs " << worst << "; non-admissible (2, 11/5) exponent "
           << exp_lo << ".." << exp_hi << " vs " << predicted << " (rel " << rel << "), " << t << " s";
  o.require(worst < 0.1, "admissible growth < 10%");
  o.require(rel < 0.1, "non-admissible growth exponent within 10%");
  o.require(t < 300.0, "runtime < 5 min");
}

// 6. Kato-Ponce / Hölder ensembles
void kato_ponce_ensembles(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ifstream fin(std::string(PLATELAB_FIXTURE_DIR) + "/kp_constants.csv");
  if (!fin) throw ResourceError("missing calibration fixture");
  const auto fixture = read_fixture(fin);
  double worst_rel = 0.0, worst_s0 = 0.0;
  std::string worst_key;
  std::size_t count = 0;
  for (std::uint64_t seed = 2; seed <= 6; ++seed)
    for (int d : {1, 3}) {
      KPEnsembleOptions opts;
      opts.d = d;
      opts.count = 200;
      opts.seed = seed;
      for (const KPSample& s : run_kp_ensemble(opts)) {
        ++count;
        const std::string key = fixture_key(s.tuple_id, s.d, s.s);
        const auto it = fixture.find(key);
        if (it == fixture.end()) throw ResourceError("fixture has no constant for " + key);
        if (s.ratio / it->second > worst_rel) {
          worst_rel = s.ratio / it->second;
          worst_key = key;
        }
        if (s.s == 0.0) worst_s0 = std::max(worst_s0, s.ratio);
      }
    }
  double dil = 0.0;
  const TestFunction f1 = TestFunction::gaussian(1, 1.0);
  const TestFunction f3 = TestFunction::gaussian(3, 1.0);
  const Grid b1(1, 256, 16.0), b3(3, 48, 8.0);
  for (double lambda : {0.5, 2.0, 3.0})
    for (auto [s, r] : {std::pair{0.0, "4"}, std::pair{1.0, "2"}, std::pair{2.0, "4"}}) {
      dil = std::max(dil, std::fabs(dilation_scaling_check(f1, lambda, s, ex(r), b1) - 1.0));
      dil = std::max(dil, std::fabs(dilation_scaling_check(f3, lambda, s, ex(r), b3) - 1.0));
    }
  const double t = seconds_since(t0);
  o.detail << count << " ratios over seeds 2-6, max ratio/fixture " << worst_rel << " (" << worst_key
           << "), max s=0 ratio " << worst_s0 << ", dilation error " << dil << ", " << t << " s";
  o.require(worst_rel <= 2.0, "ratios within 2x the calibrated constants");
  o.require(worst_s0 <= 1.0 + 1e-10, "s = 0 ratios <= 1 + 1e-10");
  o.require(dil < 1e-6, "dilation scaling to 1e-6");
  o.require(t < 300.0, "runtime < 5 min");
}

// 7. potential solver
double manufactured_error(int steps) {
  const Grid g(3, 32, 8.0);
  const double w = 1.5;
  const Field gx = gaussian(g, w);
  const Field bil = apply_radial_multiplier(gx, [](double k2) { return cplx(k2 * k2); });
  const Field vb = Field::sample(g, [](std::span<const double> x) {
    return cplx(0.5 * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 4));
  });
  auto a = [](double t) { return std::cos(t) + 0.3 * t * t; };
  auto att = [](double t) { return -std::cos(t) + 0.6; };
  auto V = [&](double t) { return cplx(1.0 + 0.5 * std::cos(t)) * vb; };
  const TimeGrid I(1.0, steps + 1);
  std::vector<Field> F;
  for (int j = 0; j < I.m(); ++j) {
    const double t = I.node(j);
    F.push_back(att(t) * gx + a(t) * bil + a(t) * pointwise_product(V(t), gx));
  }
  PlateProblem pb{a(0) * gx, Field(g, Rep::Space), Trajectory(I, F), PotentialSpec::callable(g, V), I};
  SolverOptions opts;
  opts.tol = 1e-12;
  const SolveReport rep = picard_solve(pb, opts);
  const double gn = lebesgue_norm(gx, kL2);
  double err = 0.0, nrm = 0.0;
  for (int j = 0; j < I.m(); ++j) {
    const double t = I.node(j);
    err = std::max(err, lebesgue_norm(rep.trajectory.fields[j] - a(t) * gx, kL2));
    nrm = std::max(nrm, std::fabs(a(t)) * gn);
  }
  return err / nrm;
}

double standing_wave_error(const GroundState& gs, double eps) {
  const Grid g(3, 64, 13.0 / eps);
  const double tail = 1e-4;
  const Field u0 = standing_wave(gs, eps, 0.0, g, tail);
  const TimeGrid I(1.0, 33);
  PlateProblem pb{u0, cplx(0.0, eps * eps) * u0, std::nullopt,
                  PotentialSpec::static_profile(rescaled_potential(gs.W_profile, eps, g)), I};
  const SolveReport rep = picard_solve(pb);
  const double n0 = lebesgue_norm(u0, kL2);
  double err = 0.0;
  for (int j = 0; j < I.m(); ++j)
    err = std::max(err, lebesgue_norm(rep.trajectory.fields[j] - standing_wave(gs, eps, I.node(j), g, tail), kL2) / n0);
  return err;
}

void potential_solver(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const double e32 = manufactured_error(32), e64 = manufactured_error(64), e128 = manufactured_error(128);
  const double ord1 = std::log2(e32 / e64), ord2 = std::log2(e64 / e128);
  const GroundState gs = find_ground_state(3);
  const double sw_half = standing_wave_error(gs, 0.5), sw_one = standing_wave_error(gs, 1.0);
  const double t = seconds_since(t0);
  o.detail << "manufactured error m=32/64/128 " << e32 << '/' << e64 << '/' << e128 << ", orders " << ord1 << ", "
           << ord2 << "; standing wave eps=0.5 " << sw_half << ", eps=1 " << sw_one << ", " << t << " s";
  o.require(e64 < 1e-3, "manufactured error at m = 64 < 1e-3");
  // observed order reported to two decimals
  o.require(std::round(ord1 * 100) / 100 >= 2.0 && std::round(ord2 * 100) / 100 >= 2.0, "order >= 2.00");
  o.require(sw_half < 1e-3 && sw_one < 1e-3, "standing-wave fidelity < 1e-3");
  o.require(t < 300.0, "runtime < 5 min");
}

// 8. counterexample certification
void counterexample(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Rational s(2), al(2), be(3);
  const Pair pair{ex("2"), ex("6")};
  const BlowupSchedule sched = BlowupSchedule::with_margin(3, s, al, be, Rational(1, 4), pair);
  const PartialSumReport sums = potential_norm_partial_sums(sched, 1.0, 1000000);
  const RatioReport ratio = blowup_ratio_sequence(sched, 100, 100000);
  bool gap_rejected = false;
  try {
    admissibility_gap(Rational(1), Rational(3, 2), s, 3);
  } catch (const IndexError&) {
    gap_rejected = true;
  }
  bool equal_rejected = false;
  try {
    BlowupSchedule(3, s, al, be, sched.b(), sched.b(), pair);
  } catch (const IndexError&) {
    equal_rejected = true;
  }
  const double b = sched.b().to_double();
  const bool flat = ratio_growth_exponent(3, sched.b(), sched.b(), pair.q, pair.r).is_zero() &&
                    std::fabs(ratio_value(100000, 3, b, b, pair.q, pair.r) / ratio_value(100, 3, b, b, pair.q, pair.r) - 1.0) < 1e-12;
  const GroundState gs = find_ground_state(3);
  const CrossCheckReport cc = numerical_cross_check(sched, gs, 2);
  const double t = seconds_since(t0);
  o.detail << "a " << sched.a() << ", b " << sched.b() << ", potential exponent " << sums.exponent << " = "
           << sums.exponent.to_double() << ", S_2K - S_K at K=1e5 " << sums.cauchy_gap.back()
           << "; R_k slope " << ratio.fitted << " vs " << ratio.predicted << " (rel " << ratio.relative_error
           << "); k=2 cross-check fidelity " << cc.fidelity_error << ", H^s drift " << cc.hs_drift
           << ", quotient/analytic " << cc.quotient / cc.analytic << ", denominator/analytic "
           << cc.denominator / cc.denominator_analytic << ", " << t << " s";
  o.require(sched.b() == Rational(5, 4) && sched.a() == Rational(25, 16), "powers from margin 1/4");
  o.require(sums.convergent, "partial sums convergent");
  // the stated target; margin 1/4 gives (a, b) = (25/16, 5/4) and the exact exponent -35/32
  o.require(std::fabs(sums.exponent.to_double() + 1.25) <= 1e-12, "exponent -1.25 +- 1e-12");
  o.require(ratio.relative_error < 0.02 && ratio.increasing, "R_k slope within 2% and increasing");
  o.require(gap_rejected, "g0 = 0 rejected");
  o.require(equal_rejected && flat, "a = b rejected and flat");
  o.require(cc.fidelity_ok, "cross-check fidelity");
  o.require(cc.constancy_ok, "cross-check H^s constancy");
  o.require(cc.bracket_ok && cc.denominator_ok, "cross-check quotient bracket and denominator");
  o.require(t < 300.0, "runtime < 5 min");
}

// 9. index algebra against direct integer substitution
using i128 = __int128;

bool frac_eq(i128 a, i128 b, i128 c, i128 d) { return a * d == c * b; } // a/b == c/d, b, d > 0
bool frac_le(i128 a, i128 b, i128 c, i128 d) { return a * d <= c * b; }
bool frac_lt(i128 a, i128 b, i128 c, i128 d) { return a * d < c * b; }

struct Frac {
  long n, d;
};

// 2/q + d/r = d/2, 0 <= 1/q, 1/r <= 1/2, (q, r, d) != (2, inf, 2)
bool oracle_admissible(Frac iq, Frac ir, int d) {
  if (!frac_le(0, 1, iq.n, iq.d) || !frac_le(iq.n, iq.d, 1, 2)) return false;
  if (!frac_le(0, 1, ir.n, ir.d) || !frac_le(ir.n, ir.d, 1, 2)) return false;
  // 2 iq.n / iq.d + d ir.n / ir.d = d / 2  <=>  4 iq.n ir.d + 2 d ir.n iq.d = d iq.d ir.d
  if ((i128)4 * iq.n * ir.d + (i128)2 * d * ir.n * iq.d != (i128)d * iq.d * ir.d) return false;
  if (d == 2 && frac_eq(iq.n, iq.d, 1, 2) && ir.n == 0) return false;
  return true;
}

bool open_unit(Frac x) { return frac_lt(0, 1, x.n, x.d) && frac_lt(x.n, x.d, 1, 1); }

// 1/r = 1/r1 + 1/r2 = 1/r3 + 1/r4, r, r2, r3 in (1, inf), r1, r4 in (1, inf]
bool oracle_kp(Frac r, Frac r1, Frac r2, Frac r3, Frac r4) {
  if (!open_unit(r) || !open_unit(r2) || !open_unit(r3)) return false;
  if (!frac_lt(r1.n, r1.d, 1, 1) || !frac_lt(r4.n, r4.d, 1, 1)) return false;
  if ((i128)r1.n * r2.d * r.d + (i128)r2.n * r1.d * r.d != (i128)r.n * r1.d * r2.d) return false;
  if ((i128)r3.n * r4.d * r.d + (i128)r4.n * r3.d * r.d != (i128)r.n * r3.d * r4.d) return false;
  return true;
}

// 1/r = 1/r1 + 1/r2 + (s - s1 - s2)/d, 0 <= s <= min(s1, s2), r, r1, r2 in (1, inf)
bool oracle_holder(Frac r, Frac r1, Frac r2, Frac s, Frac s1, Frac s2, int d) {
  if (!open_unit(r) || !open_unit(r1) || !open_unit(r2)) return false;
  if (frac_lt(s.n, s.d, 0, 1) || frac_lt(s1.n, s1.d, s.n, s.d) || frac_lt(s2.n, s2.d, s.n, s.d)) return false;
  // multiply everything by D = r.d r1.d r2.d s.d s1.d s2.d d
  const i128 D = (i128)r.d * r1.d * r2.d * s.d * s1.d * s2.d * d;
  auto scaled = [&](Frac f, i128 extra_den) { return D / ((i128)f.d * extra_den) * f.n; };
  const i128 lhs = scaled(r, 1);
  const i128 rhs = scaled(r1, 1) + scaled(r2, 1) + scaled(s, d) - scaled(s1, d) - scaled(s2, d);
  return lhs == rhs;
}

LebesgueExponent inv(Frac f) { return LebesgueExponent::from_reciprocal(Rational(f.n, f.d)); }
Rational rat(Frac f) { return Rational(f.n, f.d); }

void index_algebra(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  long checked = 0, disagree = 0, accepted = 0;
  auto unit_fracs = [](int max_den) {
    std::vector<Frac> out;
    for (int k = 1; k <= max_den; ++k)
      for (int j = 0; j <= k; ++j) out.push_back({j, k});
    return out;
  };
  // admissibility, exhaustive (includes non-reduced duplicates on purpose)
  const auto f12 = unit_fracs(12);
  for (int d = 1; d <= 6; ++d)
    for (Frac q : f12)
      for (Frac r : f12) {
        ++checked;
        accepted += oracle_admissible(q, r, d);
        if (static_cast<bool>(is_admissible(inv(q), inv(r), d)) != oracle_admissible(q, r, d)) ++disagree;
      }
  const bool triple_rejected = !is_admissible(ex("2"), ex("inf"), 2) && is_admissible(ex("2"), ex("6"), 3);
  // Kato-Ponce relation, exhaustive over reduced fractions with denominators <= 6 (13^5 tuples)
  std::vector<Frac> f4;
  for (Frac f : unit_fracs(6))
    if (std::gcd(f.n, f.d) == 1 || f.n == 0) f4.push_back(f);
  for (Frac r : f4)
    for (Frac r1 : f4)
      for (Frac r2 : f4)
        for (Frac r3 : f4)
          for (Frac r4 : f4) {
            ++checked;
            const bool v = static_cast<bool>(validate_kp_indices({inv(r), inv(r1), inv(r2), inv(r3), inv(r4)}));
            accepted += oracle_kp(r, r1, r2, r3, r4);
            if (v != oracle_kp(r, r1, r2, r3, r4)) ++disagree;
          }
  // Hölder relation, exhaustive over a small lattice
  const std::vector<Frac> f6 = [&] {
    std::vector<Frac> out;
    for (Frac f : unit_fracs(6))
      if (f.n > 0 && f.n < f.d && std::gcd(f.n, f.d) == 1) out.push_back(f);
    return out;
  }();
  const std::vector<Frac> svals{{0, 1}, {1, 2}, {1, 1}, {3, 2}, {2, 1}};
  for (int d = 1; d <= 3; ++d)
    for (Frac r : f6)
      for (Frac r1 : f6)
        for (Frac r2 : f6)
          for (Frac s : svals)
            for (Frac s1 : svals)
              for (Frac s2 : svals) {
                ++checked;
                const bool v = static_cast<bool>(
                    validate_holder_indices({inv(r), inv(r1), inv(r2), rat(s), rat(s1), rat(s2)}, d));
                accepted += oracle_holder(r, r1, r2, s, s1, s2, d);
                if (v != oracle_holder(r, r1, r2, s, s1, s2, d)) ++disagree;
              }
  // dual involution
  for (Frac f : unit_fracs(40)) {
    ++checked;
    const LebesgueExponent p = inv(f);
    if (!(p.dual().dual() == p) || !(p.reciprocal() + p.dual().reciprocal() == Rational(1))) ++disagree;
  }
  // 10^4 random tuples
  std::mt19937_64 rng(99);
  auto rnd = [&](long max_den, bool half) {
    const long k = std::uniform_int_distribution<long>(1, max_den)(rng);
    const long j = std::uniform_int_distribution<long>(0, half ? k / 2 + 1 : k)(rng);
    return Frac{std::min(j, k), k};
  };
  auto rnd_s = [&]() { return Frac{std::uniform_int_distribution<long>(0, 12)(rng), std::uniform_int_distribution<long>(1, 4)(rng)}; };
  long random_checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const int d = std::uniform_int_distribution<int>(1, 6)(rng);
    Frac q = rnd(1000, true), r = rnd(1000, true);
    if (i % 3 == 0) {
      // force the relation by solving for 1/q so that admissible cases occur
      r = rnd(200, true);
      q = Frac{d * (r.d - 2 * r.n), 4 * r.d};
      if (q.n < 0 || q.n > q.d) q = rnd(1000, true);
    }
    const bool a = static_cast<bool>(is_admissible(inv(q), inv(r), d)) != oracle_admissible(q, r, d);
    Frac kr = rnd(60, false), k1 = rnd(60, false), k3 = rnd(60, false);
    Frac k2{kr.n * k1.d - k1.n * kr.d, kr.d * k1.d}, k4{kr.n * k3.d - k3.n * kr.d, kr.d * k3.d};
    bool kp_err = false;
    if (k2.n >= 0 && k4.n >= 0 && frac_le(k2.n, k2.d, 1, 1) && frac_le(k4.n, k4.d, 1, 1))
      kp_err = static_cast<bool>(validate_kp_indices({inv(kr), inv(k1), inv(k2), inv(k3), inv(k4)})) !=
               oracle_kp(kr, k1, k2, k3, k4);
    const Frac hr = rnd(30, false), h1 = rnd(30, false), h2 = rnd(30, false);
    const Frac s = rnd_s(), s1 = rnd_s(), s2 = rnd_s();
    const bool h_err = static_cast<bool>(validate_holder_indices({inv(hr), inv(h1), inv(h2), rat(s), rat(s1), rat(s2)}, d)) !=
                       oracle_holder(hr, h1, h2, s, s1, s2, d);
    // rational arithmetic against 128-bit substitution
    const Frac x = rnd(100000, false), y{std::uniform_int_distribution<long>(-100000, 100000)(rng), x.d + 7};
    const Rational sum = rat(x) + rat(y), prod = rat(x) * rat(y);
    const bool arith_err = !frac_eq(sum.num(), sum.den(), (i128)x.n * y.d + (i128)y.n * x.d, (i128)x.d * y.d) ||
                           !frac_eq(prod.num(), prod.den(), (i128)x.n * y.n, (i128)x.d * y.d);
    random_checked += 4;
    disagree += a + kp_err + h_err + arith_err;
  }
  checked += random_checked;
  const double t = seconds_since(t0);
  o.detail << checked << " checks (" << accepted << " valid exhaustive tuples, " << random_checked
           << " from 10^4 random tuples), " << disagree
           << " disagreements, " << t << " s";
  o.require(disagree == 0, "zero validator/oracle disagreements");
  o.require(triple_rejected, "excluded triple handled");
  o.require(t < 10.0, "runtime < 10 s");
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

} // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  const std::vector<Criterion> all{
      {1, "1-D Newton identities", newton_identities},
      {2, "d = 3 ground state", ground_state_d3},
      {3, "spectral propagator exactness", propagator_exactness},
      {4, "dispersive decay", dispersive_decay},
      {5, "Strichartz boundedness", strichartz_boundedness},
      {6, "Kato-Ponce / Holder ensembles", kato_ponce_ensembles},
      {7, "potential solver", potential_solver},
      {8, "counterexample certification", counterexample},
      {9, "index algebra", index_algebra},
  };
  int failures = 0;
  for (const Criterion& c : all) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " [error: " << e.what() << "]";
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail.str()
              << std::endl;
    failures += !o.ok;
  }
  return failures == 0 ? 0 : 1;
}
