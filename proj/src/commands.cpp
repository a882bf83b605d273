#include "platelab/commands.hpp"
#include "platelab/counterexample.hpp"
#include "platelab/estimates.hpp"
#include "platelab/ground_state.hpp"
#include "platelab/kato_ponce.hpp"
#include "platelab/potential_solver.hpp"
#include "platelab/version.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

namespace platelab {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::Config:
  case ErrorKind::Index: return kExitConfig;
  case ErrorKind::Resource: return kExitResource;
  default: return kExitCertification;
  }
}

std::string error_record(const Error& e) {
  nlohmann::json j;
  j["error"] = to_string(e.kind());
  j["exit_code"] = exit_code_for(e.kind());
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) j["messages"] = ce->messages;
  else j["messages"] = {e.what()};
  return j.dump();
}

fs::path output_directory(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("PLATELAB_OUTPUT_DIR"); env && *env) return env;
  return cfg.output;
}

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os) throw ResourceError("cannot write '" + (dir / name).string() + "'");
  os << std::setprecision(17);
  return os;
}

double radius2(std::span<const double> x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return r2;
}

Field gaussian(const Grid& g, double width) {
  return Field::sample(g, [width](std::span<const double> x) { return cplx(std::exp(-radius2(x) / (2 * width * width))); });
}

void cmd_simulate(const ExperimentConfig& cfg, const fs::path& out, std::ostream& log) {
  const Grid g(cfg.grid.d, cfg.grid.n, cfg.grid.L);
  const TimeGrid I(cfg.time.T, cfg.time.m);
  const double width = cfg.extra_double("simulate.width", 1.0);
  const double amp = cfg.extra_double("simulate.amplitude", 0.5);
  const ClassIndices cls{Rational::parse(cfg.indices.alpha), Rational::parse(cfg.indices.beta),
                         Rational::parse(cfg.indices.s)};
  const Field V = Field::sample(g, [amp](std::span<const double> x) { return cplx(amp * std::exp(-radius2(x) / 4)); });
  PlateProblem pb{gaussian(g, width), Field(g, Rep::Space), std::nullopt, PotentialSpec::static_profile(V, cls), I};
  SolverOptions opts;
  opts.tol = cfg.extra_double("simulate.tol", 1e-10);
  const SolveReport rep = picard_solve(pb, opts);
  const double s = cls.s.to_double();
  const LebesgueExponent two(Rational(2));
  auto csv = open_output(out, "simulate.csv");
  write_csv_preamble(csv, {"t", "l2", "hs"});
  for (int j = 0; j < I.m(); ++j) {
    const Field& u = rep.trajectory.fields[j];
    csv << I.node(j) << ',' << lebesgue_norm(to_rep(u, Rep::Space), two) << ',' << sobolev_seminorm(u, s, two) << '\n';
  }
  auto txt = open_output(out, "solve_report.txt");
  write_solve_report(txt, rep);
  if (cfg.extra_string("simulate.export", "false") == "true") export_trajectory(rep.trajectory, (out / "trajectory").string());
  log << "simulate: " << rep.subintervals.size() << " subintervals, output in " << out.string() << '\n';
}

void cmd_dispersive(const ExperimentConfig& cfg, const fs::path& out, std::ostream& log) {
  const Grid g(cfg.grid.d, cfg.grid.n, cfg.grid.L);
  const LebesgueExponent r = cfg.indices.r.empty() ? LebesgueExponent::infinity() : LebesgueExponent::parse(cfg.indices.r);
  const double width = cfg.extra_double("dispersive.width", 1.0);
  const double t_min = cfg.extra_double("dispersive.t_min", 0.5);
  const double t_max = cfg.extra_double("dispersive.t_max", g.L() * g.L() / 10.0);
  const int samples = cfg.extra_int("dispersive.samples", 50);
  if (samples < 2 || !(t_max > t_min)) throw ConfigError("[dispersive] needs samples >= 2 and t_max > t_min");
  std::vector<double> times;
  for (int i = 0; i < samples; ++i) times.push_back(t_min + (t_max - t_min) * i / (samples - 1));
  const Field u0 = gaussian(g, width);
  const std::vector<double> ratio = dispersive_sweep(u0, times, r);
  auto csv = open_output(out, "dispersive.csv");
  write_csv_preamble(csv, {"t", "ratio"});
  for (std::size_t i = 0; i < times.size(); ++i) csv << times[i] << ',' << ratio[i] << '\n';
  log << "verify-dispersive: " << samples << " times, output in " << out.string() << '\n';
}

FlowVariant parse_variant(const std::string& v) {
  if (v == "plate-cos") return FlowVariant::PlateCosInput;
  if (v == "plate-sinc") return FlowVariant::PlateSincInput;
  return FlowVariant::Schrodinger;
}

void cmd_strichartz(const ExperimentConfig& cfg, const fs::path& out, std::ostream& log) {
  const Grid g(cfg.grid.d, cfg.grid.n, cfg.grid.L);
  const TimeGrid I(cfg.time.T, cfg.time.m);
  const LebesgueExponent q = LebesgueExponent::parse(cfg.indices.q), r = LebesgueExponent::parse(cfg.indices.r);
  const double s = Rational::parse(cfg.indices.s).to_double();
  const FlowVariant variant = parse_variant(cfg.extra_string("strichartz.variant", "schrodinger"));
  const double wmin = cfg.extra_double("strichartz.width_min", 1.0), wmax = cfg.extra_double("strichartz.width_max", 1.5);
  std::mt19937_64 rng(cfg.ensemble.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto csv = open_output(out, "strichartz.csv");
  write_sweep_csv_header(csv);
  double worst = 0.0;
  for (int member = 0; member < cfg.ensemble.count; ++member) {
    const double w = wmin * std::pow(wmax / wmin, unit(rng));
    std::vector<double> c(g.d()), k(g.d());
    for (int a = 0; a < g.d(); ++a) {
      c[a] = (2 * unit(rng) - 1) * std::min(2.0, g.L() / 4);
      k[a] = (2 * unit(rng) - 1) * 0.5;
    }
    Field f = Field::sample(g, [&](std::span<const double> x) {
      double r2 = 0.0, ph = 0.0;
      for (int a = 0; a < g.d(); ++a) {
        r2 += (x[a] - c[a]) * (x[a] - c[a]);
        ph += k[a] * x[a];
      }
      return std::exp(-r2 / (2 * w * w)) * std::polar(1.0, ph);
    });
    if (variant == FlowVariant::PlateSincInput) {
      // remove the mean so the negative-order denominator is finite
      Field spec = forward_transform(f);
      spec[0] = 0.0;
      f = inverse_transform(spec);
    }
    const double Q = strichartz_quotient_free(f, q, r, s, I, variant);
    worst = std::max(worst, Q);
    write_sweep_csv_row(csv, {variant, g.d(), g.n(), g.L(), s, q.str(), r.str(), I.T_end(), Q});
  }
  log << "verify-strichartz: " << cfg.ensemble.count << " members, max quotient " << worst << '\n';
}

void cmd_kato_ponce(const ExperimentConfig& cfg, const fs::path& out, std::ostream& log) {
  KPEnsembleOptions opts;
  opts.d = cfg.grid.d;
  opts.count = cfg.ensemble.count;
  opts.seed = cfg.ensemble.seed;
  const std::vector<KPSample> samples = run_kp_ensemble(opts);
  auto csv = open_output(out, "kato_ponce.csv");
  write_kp_csv_header(csv);
  for (const KPSample& s : samples) write_kp_csv_row(csv, s);
  auto fix = open_output(out, "kp_constants.csv");
  write_fixture(fix, max_ratios(samples), opts.seed, opts.count);
  log << "kato-ponce: " << samples.size() << " ratios, output in " << out.string() << '\n';
}

void cmd_ground_state(const ExperimentConfig& cfg, const fs::path& out, std::ostream& log) {
  const int d = cfg.grid.d;
  auto txt = open_output(out, "ground_state_report.txt");
  bool ok = true;
  GroundState gs;
  if (d == 1) {
    gs = newton_ground_state();
    const NewtonResiduals res = newton_residuals_1d();
    txt << "profile closed form v = (3/2) sech^2(x/2)\n"
        << "second_order_residual " << res.second_order << '\n'
        << "fourth_order_residual " << res.fourth_order << '\n';
    ok = res.second_order < 1e-8 && res.fourth_order < 1e-6;
  } else {
    gs = find_ground_state(d);
    const double so = second_order_residual(gs, gs.r_match);
    const FourthOrderReport fo = verify_fourth_order(gs);
    const BLReport bl = check_bl_conditions(d);
    const DecayFit fit = fit_decay(gs.profile, 5.0, std::min(20.0, gs.profile.R()));
    txt << "sigma_star " << gs.sigma_star << '\n'
        << "bracket " << gs.bracket_hi - gs.bracket_lo << '\n'
        << "bisection_steps " << gs.bisection_steps << '\n'
        << "r_match " << gs.r_match << '\n'
        << "second_order_residual " << so << '\n'
        << "fourth_order_fd_residual " << fo.fd_residual << '\n'
        << "fourth_order_intermediate_residual " << fo.intermediate_residual << '\n'
        << "fourth_order_spectral_residual " << fo.spectral_residual << '\n'
        << "bl_all_pass " << (bl.all_pass() ? "true" : "false") << '\n'
        << "decay_rate " << fit.delta << '\n';
    ok = so < 1e-6 && fo.pass(1e-4) && bl.all_pass();
  }
  auto csv = open_output(out, "profile.csv");
  write_profile_csv(csv, gs);
  log << "ground-state d=" << d << ": " << (ok ? "certified" : "certification failed") << '\n';
  if (!ok) throw CertificationError("ground-state residuals above threshold, see ground_state_report.txt");
}

void cmd_counterexample(const ExperimentConfig& cfg, const fs::path& out, std::ostream& log) {
  const int d = cfg.grid.d;
  const Rational s = Rational::parse(cfg.indices.s), alpha = Rational::parse(cfg.indices.alpha),
                 beta = Rational::parse(cfg.indices.beta);
  const Pair pair{LebesgueExponent::parse(cfg.indices.q), LebesgueExponent::parse(cfg.indices.r)};
  const Rational margin = Rational::parse(cfg.extra_string("counterexample.margin", "1/4"));
  const BlowupSchedule sched = BlowupSchedule::with_margin(d, s, alpha, beta, margin, pair);
  const long terms = cfg.extra_int("counterexample.terms", 1000);
  const GroundState gs = find_ground_state(d);
  const double W_norm = potential_profile_norm(gs, s, beta);
  auto csv = open_output(out, "schedule.csv");
  write_schedule_csv(csv, sched, W_norm, terms);
  const PartialSumReport sums = potential_norm_partial_sums(sched, W_norm, terms);
  const RatioReport ratio = blowup_ratio_sequence(sched);
  auto txt = open_output(out, "counterexample_summary.txt");
  txt << "gap " << sched.gap() << "\na " << sched.a() << "\nb " << sched.b() << "\nW_norm " << W_norm
      << "\npotential_exponent " << sums.exponent << "\npotential_sum " << (sums.convergent ? "convergent" : "divergent")
      << "\nratio_exponent_predicted " << ratio.predicted << "\nratio_exponent_fitted " << ratio.fitted
      << "\nratio_increasing " << (ratio.increasing ? "true" : "false") << '\n';
  bool ok = sums.convergent && ratio.increasing && ratio.relative_error < 0.02;
  if (const int k = cfg.extra_int("counterexample.cross_check", 0); k > 0) {
    const CrossCheckReport cc = numerical_cross_check(sched, gs, k);
    txt << "cross_check_k " << k << "\nfidelity_error " << cc.fidelity_error << "\nhs_drift " << cc.hs_drift
        << "\nquotient " << cc.quotient << "\nquotient_analytic " << cc.analytic << "\ndenominator " << cc.denominator
        << "\ndenominator_analytic " << cc.denominator_analytic << "\ncross_check " << (cc.ok() ? "pass" : "fail")
        << '\n';
    ok = ok && cc.ok();
  }
  log << "counterexample: exponent " << sums.exponent << ", growth " << ratio.fitted << '\n';
  if (!ok) throw CertificationError("counterexample certification failed, see counterexample_summary.txt");
}

void cmd_pairs(const ExperimentConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto pairs = enumerate_admissible_pairs(cfg.grid.d, cfg.extra_int("pairs.max_den", 12));
  auto csv = open_output(out, "admissible_pairs.csv");
  write_csv_preamble(csv, {"q", "r"});
  for (const auto& p : pairs) {
    csv << p.q.str() << ',' << p.r.str() << '\n';
    log << '(' << p.q.str() << ", " << p.r.str() << ")\n";
  }
}

} // namespace

void run(const ExperimentConfig& cfg, std::ostream& log) {
  const fs::path out = output_directory(cfg);
  if (cfg.command == "simulate") cmd_simulate(cfg, out, log);
  else if (cfg.command == "verify-dispersive") cmd_dispersive(cfg, out, log);
  else if (cfg.command == "verify-strichartz") cmd_strichartz(cfg, out, log);
  else if (cfg.command == "kato-ponce") cmd_kato_ponce(cfg, out, log);
  else if (cfg.command == "ground-state") cmd_ground_state(cfg, out, log);
  else if (cfg.command == "counterexample") cmd_counterexample(cfg, out, log);
  else if (cfg.command == "admissible-pairs") cmd_pairs(cfg, out, log);
  else throw ConfigError("unknown command '" + cfg.command + "'");
}

} // namespace platelab
