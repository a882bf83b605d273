#include "platelab/estimates.hpp"
#include "platelab/errors.hpp"
#include "platelab/propagators.hpp"
#include "platelab/version.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace platelab {

const char* to_string(FlowVariant v) {
  switch (v) {
  case FlowVariant::Schrodinger: return "schrodinger";
  case FlowVariant::PlateCosInput: return "plate-cos";
  case FlowVariant::PlateSincInput: return "plate-sinc";
  }
  return "?";
}

double fixed_time_ratio(const Field& u0, double t, const LebesgueExponent& r) {
  if (t == 0.0) throw DomainError("fixed-time ratio needs t != 0");
  const int d = u0.grid().d();
  const double decay = d * (0.5 - r.reciprocal().to_double());
  const double den = lebesgue_norm(to_rep(u0, Rep::Space), r.dual());
  if (den == 0.0) throw DomainError("fixed-time ratio of zero data");
  const Field u = inverse_transform(schrodinger_flow(to_rep(u0, Rep::Spectral), t));
  return lebesgue_norm(u, r) * std::pow(std::fabs(t), decay) / den;
}

std::vector<double> dispersive_sweep(const Field& u0, const std::vector<double>& times, const LebesgueExponent& r) {
  const double L = u0.grid().L();
  const double limit = L * L / 10.0;
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (std::fabs(t) > limit)
      throw ResourceError("t = " + std::to_string(t) + " exceeds the torus validity window L^2/10 = " +
                          std::to_string(limit));
    out.push_back(fixed_time_ratio(u0, t, r));
  }
  return out;
}

cplx periodized_gaussian_flow(std::span<const double> x, double width, double t, double L) {
  const cplx a(width * width, 2.0 * t); // w^2 + 2it
  const cplx amp = std::sqrt(width * width / a);
  const double decay = width * width / (2.0 * std::norm(a)); // Re 1/(2a)
  // images beyond |x + 2Lk| with decay (.)^2 > 60 are below e^{-60}
  const long K = 1 + static_cast<long>(std::ceil(std::sqrt(60.0 / decay) / (2.0 * L)));
  cplx out = 1.0;
  for (double xa : x) {
    cplx sum = 0.0;
    for (long k = -K; k <= K; ++k) {
      const double y = xa + 2.0 * L * k;
      sum += std::exp(-y * y / (2.0 * a));
    }
    out *= amp * sum;
  }
  return out;
}

namespace {

// ||u||_{H^sigma} (homogeneous, L^2 based) allowing sigma < 0 on mean-zero data.
double homogeneous_l2(const Field& f, double sigma) {
  if (sigma >= 0.0) return sobolev_seminorm(f, sigma, LebesgueExponent(Rational(2)));
  const Field spec = to_rep(f, Rep::Spectral);
  const std::vector<double> k2 = xi_squared(f.grid());
  double sum = 0.0, total = 0.0;
  for (std::size_t i = 0; i < k2.size(); ++i) {
    total += std::norm(spec[i]);
    if (k2[i] != 0.0) sum += std::pow(k2[i], sigma) * std::norm(spec[i]);
  }
  if (std::norm(spec[0]) > 1e-24 * total)
    throw DomainError("negative-order homogeneous norm needs mean-zero data (|mean mode| = " +
                      std::to_string(std::abs(spec[0])) + ")");
  return std::sqrt(sum * f.grid().cell_volume());
}

// Homogeneous W^{sigma, r}; negative sigma only for r = 2.
double seminorm_any(const Field& f, double sigma, const LebesgueExponent& r) {
  if (sigma >= 0.0) return sobolev_seminorm(f, sigma, r);
  if (r.reciprocal() == Rational(1, 2)) return homogeneous_l2(f, sigma);
  throw DomainError("negative-order norm only supported for r = 2");
}

cplx flow_symbol(FlowVariant v, double t, double k2) {
  const double th = t * k2;
  switch (v) {
  case FlowVariant::Schrodinger: return std::polar(1.0, -th);
  case FlowVariant::PlateCosInput: return std::cos(th);
  case FlowVariant::PlateSincInput: return k2 == 0.0 ? t : std::sin(th) / k2;
  }
  return 0.0;
}

void check_mean_zero(const Field& spec) {
  double total = 0.0;
  for (const cplx& c : spec.data()) total += std::norm(c);
  if (std::norm(spec[0]) > 1e-24 * total)
    throw DomainError("sinc-input quotient needs mean-zero velocity data");
}

} // namespace

std::vector<std::vector<double>> free_flow_norms(const Field& data, FlowVariant variant, double s,
                                                 const std::vector<LebesgueExponent>& rs, const TimeGrid& I) {
  if (s < 0.0) throw DomainError("free-flow norms need s >= 0");
  const Grid& g = data.grid();
  const Field spec = to_rep(data, Rep::Spectral);
  if (variant == FlowVariant::PlateSincInput) check_mean_zero(spec);
  const std::vector<double> k2 = xi_squared(g);
  std::vector<double> weight(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i)
    weight[i] = s == 0.0 ? 1.0 : (k2[i] == 0.0 ? 0.0 : std::pow(k2[i], 0.5 * s));
  std::vector<std::vector<double>> out(rs.size(), std::vector<double>(I.m()));
  const double dv = g.cell_volume();
  for (int j = 0; j < I.m(); ++j) {
    const double t = I.node(j);
    Field w(g, Rep::Spectral);
    for (std::size_t i = 0; i < k2.size(); ++i) w[i] = weight[i] * flow_symbol(variant, t, k2[i]) * spec[i];
    const Field u = inverse_transform(w);
    for (std::size_t k = 0; k < rs.size(); ++k) out[k][j] = lebesgue_norm(u.data(), dv, rs[k]);
  }
  return out;
}

double strichartz_denominator(const Field& data, FlowVariant variant, double s) {
  if (variant == FlowVariant::PlateSincInput) return homogeneous_l2(data, s - 2.0);
  return homogeneous_l2(data, s);
}

double strichartz_quotient_unchecked(const Field& data, const LebesgueExponent& q, const LebesgueExponent& r,
                                     double s, const TimeGrid& I, FlowVariant variant) {
  const double den = strichartz_denominator(data, variant, s);
  if (den == 0.0) throw DomainError("Strichartz quotient of zero data");
  const auto norms = free_flow_norms(data, variant, s, {r}, I);
  return mixed_norm_from_values(I, norms[0], q) / den;
}

double strichartz_quotient_free(const Field& data, const LebesgueExponent& q, const LebesgueExponent& r, double s,
                                const TimeGrid& I, FlowVariant variant) {
  const Verdict v = is_admissible(q, r, data.grid().d());
  if (!v) throw IndexError("pair (q, r) = (" + q.str() + ", " + r.str() + ") is not admissible: " + v.diagnostic);
  return strichartz_quotient_unchecked(data, q, r, s, I, variant);
}

namespace {

// plain product; skips the inf/nan recovery of operator* on finite data
inline cplx mul_finite(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

} // namespace

std::vector<std::vector<double>> separable_flow_norms(const SeparableData& data,
                                                      const std::vector<LebesgueExponent>& rs, const TimeGrid& I) {
  if (data.factors.empty()) throw DomainError("separable data without factors");
  for (const Field& f : data.factors)
    if (f.grid().d() != 1) throw DomainError("separable factors must be one-dimensional");
  std::vector<std::vector<double>> out(rs.size(), std::vector<double>(I.m(), 1.0));
  for (const Field& f : data.factors) {
    const Field spec = to_rep(f, Rep::Spectral);
    const std::vector<double> k2 = xi_squared(f.grid());
    const double dv = f.grid().cell_volume();
    // phases advance by a fixed factor on the uniform grid, refreshed exactly every 64 nodes
    std::vector<cplx> phase(k2.size()), step(k2.size());
    for (std::size_t i = 0; i < k2.size(); ++i) step[i] = std::polar(1.0, -I.step() * k2[i]);
    Field w(f.grid(), Rep::Spectral);
    for (int j = 0; j < I.m(); ++j) {
      const double t = I.node(j);
      if (j % 64 == 0)
        for (std::size_t i = 0; i < k2.size(); ++i) phase[i] = std::polar(1.0, -t * k2[i]);
      else
        for (std::size_t i = 0; i < k2.size(); ++i) phase[i] = mul_finite(phase[i], step[i]);
      for (std::size_t i = 0; i < k2.size(); ++i) w[i] = mul_finite(phase[i], spec[i]);
      const Field u = inverse_transform(w);
      for (std::size_t k = 0; k < rs.size(); ++k) out[k][j] *= lebesgue_norm(u.data(), dv, rs[k]);
    }
  }
  return out;
}

double separable_l2_norm(const SeparableData& data) {
  double p = 1.0;
  for (const Field& f : data.factors) p *= lebesgue_norm(to_rep(f, Rep::Space), LebesgueExponent(Rational(2)));
  return p;
}

namespace {

// Plate solution at every node of I by exact stepping; F (optional) on I.
Trajectory plate_nodes(const Grid& g, const std::vector<cplx>& U0, const std::vector<cplx>& P0,
                       const Trajectory* F, const TimeGrid& I) {
  std::vector<cplx> U = U0, P = P0;
  std::vector<Field> out;
  out.reserve(I.m());
  out.push_back(inverse_transform(Field(g, Rep::Spectral, U)));
  PlateStepper stepper(g, I.step());
  std::vector<cplx> G0, G1;
  if (F) G0 = to_rep(F->fields[0], Rep::Spectral).values();
  for (int j = 1; j < I.m(); ++j) {
    if (F) {
      G1 = to_rep(F->fields[j], Rep::Spectral).values();
      stepper.step(U, P, &G0, &G1);
      G0.swap(G1);
    } else {
      stepper.step(U, P, nullptr, nullptr);
    }
    out.push_back(inverse_transform(Field(g, Rep::Spectral, U)));
  }
  return Trajectory(I, std::move(out));
}

void check_pair(const Pair& p, int d, const char* what) {
  const Verdict v = is_admissible(p.q, p.r, d);
  if (!v) throw IndexError(std::string(what) + " (" + p.q.str() + ", " + p.r.str() + ") is not admissible: " +
                           v.diagnostic);
}

double forcing_norm(const Trajectory& F, const Pair& dual_pair, double s) {
  const LebesgueExponent qd = dual_pair.q.dual(), rd = dual_pair.r.dual();
  std::vector<double> vals;
  vals.reserve(F.fields.size());
  for (const Field& f : F.fields) vals.push_back(seminorm_any(f, s - 2.0, rd));
  return mixed_norm_from_values(F.times, vals, qd);
}

double solution_norm(const Trajectory& u, const Pair& pair, double s) {
  std::vector<double> vals;
  vals.reserve(u.fields.size());
  for (const Field& f : u.fields) vals.push_back(sobolev_seminorm(f, s, pair.r));
  return mixed_norm_from_values(u.times, vals, pair.q);
}

} // namespace

Trajectory duhamel_trajectory(const Trajectory& F) {
  const Grid& g = F.grid();
  const std::vector<cplx> zero(g.size());
  return plate_nodes(g, zero, zero, &F, F.times);
}

double strichartz_quotient_duhamel(const Trajectory& F, const Pair& pair, const Pair& dual_pair, double s) {
  const int d = F.grid().d();
  check_pair(pair, d, "pair");
  check_pair(dual_pair, d, "dual pair");
  const double den = forcing_norm(F, dual_pair, s);
  if (den == 0.0) throw DomainError("Duhamel quotient of zero forcing");
  return solution_norm(duhamel_trajectory(F), pair, s) / den;
}

double solution_quotient(const Field& u0, const Field& u1, const std::optional<Trajectory>& F, const Pair& pair,
                         const Pair& dual_pair, double s, const TimeGrid& I) {
  const Grid& g = u0.grid();
  if (!(u1.grid() == g)) throw DomainError("initial data live on different grids");
  check_pair(pair, g.d(), "pair");
  check_pair(dual_pair, g.d(), "dual pair");
  double den = homogeneous_l2(u0, s) + homogeneous_l2(u1, s - 2.0);
  if (F) {
    if (!(F->grid() == g)) throw DomainError("forcing lives on a different grid");
    if (F->times.m() != I.m() || F->times.T_end() != I.T_end())
      throw DomainError("forcing must be sampled on the evaluation time grid");
    den += forcing_norm(*F, dual_pair, s);
  }
  if (den == 0.0) throw DomainError("solution quotient of zero data");
  const Trajectory u = plate_nodes(g, to_rep(u0, Rep::Spectral).values(), to_rep(u1, Rep::Spectral).values(),
                                   F ? &*F : nullptr, I);
  return solution_norm(u, pair, s) / den;
}

void write_sweep_csv_header(std::ostream& os) {
  write_csv_preamble(os, {"variant", "d", "n", "L", "s", "q", "r", "T", "quotient"});
}

void write_sweep_csv_row(std::ostream& os, const SweepRow& row) {
  os << std::setprecision(17) << to_string(row.variant) << ',' << row.d << ',' << row.n << ',' << row.L << ','
     << row.s << ',' << row.q << ',' << row.r << ',' << row.T << ',' << row.quotient << '\n';
}

} // namespace platelab
