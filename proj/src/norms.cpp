#include "platelab/norms.hpp"
#include "platelab/errors.hpp"
#include "platelab/version.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace platelab {

void write_csv_preamble(std::ostream& os, const std::vector<std::string>& columns) {
  os << "# platelab " << kVersion << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
}

TimeGrid::TimeGrid(double T_end, int m) : T_end_(T_end), m_(m) {
  if (!(T_end > 0.0) || !std::isfinite(T_end)) throw DomainError("time grid needs T_end > 0");
  if (m < 2) throw DomainError("time grid needs at least 2 nodes");
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> t(m_);
  for (int i = 0; i < m_; ++i) t[i] = node(i);
  return t;
}

std::vector<double> TimeGrid::weights() const {
  std::vector<double> w(m_, step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

TimeGrid TimeGrid::prefix(int count) const {
  if (count < 2 || count > m_) throw DomainError("time grid prefix out of range");
  return TimeGrid(node(count - 1), count);
}

Trajectory::Trajectory(TimeGrid t, std::vector<Field> f) : times(t), fields(std::move(f)) {
  if (fields.empty()) throw DomainError("empty trajectory");
  if (static_cast<int>(fields.size()) != times.m())
    throw DomainError("trajectory has " + std::to_string(fields.size()) + " fields for " +
                      std::to_string(times.m()) + " time nodes");
  for (const auto& x : fields)
    if (!(x.grid() == fields.front().grid())) throw DomainError("trajectory fields live on different grids");
}

double lebesgue_norm(std::span<const cplx> values, double dv, const LebesgueExponent& r) {
  if (r.is_infinite()) {
    double m = 0.0;
    for (const cplx& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  const Rational& inv = r.reciprocal();
  double sum = 0.0;
  if (inv.num() == 1 && inv.den() <= 8) {
    const long k = static_cast<long>(inv.den());
    for (const cplx& v : values) {
      double a2 = std::norm(v);
      double p = 1.0;
      for (long j = 0; j < k / 2; ++j) p *= a2;
      if (k % 2 == 1) p *= std::sqrt(a2);
      sum += p;
    }
    if (k == 1) return sum * dv;
    if (k == 2) return std::sqrt(sum * dv);
    return std::pow(sum * dv, 1.0 / static_cast<double>(k));
  }
  const double rr = r.value();
  const double half = 0.5 * rr;
  for (const cplx& v : values) {
    double a2 = std::norm(v);
    if (a2 > 0.0) sum += std::pow(a2, half);
  }
  return std::pow(sum * dv, 1.0 / rr);
}

double lebesgue_norm(const Field& f, const LebesgueExponent& r) {
  if (f.rep() != Rep::Space) throw RepresentationError("lebesgue_norm expects a space-representation field");
  return lebesgue_norm(f.data(), f.grid().cell_volume(), r);
}

namespace {

double weighted_spectral_l2(const Field& spec, const std::vector<double>& k2, double s, bool homogeneous) {
  double sum = 0.0;
  for (std::size_t i = 0; i < k2.size(); ++i) {
    double w;
    if (homogeneous) w = (k2[i] == 0.0) ? (s == 0.0 ? 1.0 : 0.0) : std::pow(k2[i], s);
    else w = std::pow(1.0 + k2[i], s);
    sum += w * std::norm(spec[i]);
  }
  return std::sqrt(sum * spec.grid().cell_volume());
}

bool is_two(const LebesgueExponent& r) { return r.reciprocal() == Rational(1, 2); }

} // namespace

double sobolev_seminorm(const Field& f, double s, const LebesgueExponent& r) {
  if (!(s >= 0.0)) throw DomainError("unsupported order: homogeneous norms need s >= 0, got " + std::to_string(s));
  if (s == 0.0) return lebesgue_norm(to_rep(f, Rep::Space), r);
  if (is_two(r)) return weighted_spectral_l2(to_rep(f, Rep::Spectral), xi_squared(f.grid()), s, true);
  const double hs = 0.5 * s;
  Field g = apply_radial_multiplier(to_rep(f, Rep::Spectral), [hs](double k2) {
    return cplx(k2 == 0.0 ? 0.0 : std::pow(k2, hs));
  });
  return lebesgue_norm(inverse_transform(g), r);
}

double sobolev_norm(const Field& f, double s, const LebesgueExponent& r) {
  if (!std::isfinite(s)) throw DomainError("sobolev order must be finite");
  if (s == 0.0) return lebesgue_norm(to_rep(f, Rep::Space), r);
  if (is_two(r)) return weighted_spectral_l2(to_rep(f, Rep::Spectral), xi_squared(f.grid()), s, false);
  const double hs = 0.5 * s;
  Field g = apply_radial_multiplier(to_rep(f, Rep::Spectral), [hs](double k2) { return cplx(std::pow(1.0 + k2, hs)); });
  return lebesgue_norm(inverse_transform(g), r);
}

double spatial_norm(const Field& f, const SobolevIndex& idx) {
  return idx.homogeneous ? sobolev_seminorm(f, idx.s, idx.r) : sobolev_norm(f, idx.s, idx.r);
}

double mixed_norm_from_values(const TimeGrid& times, std::span<const double> values, const LebesgueExponent& q) {
  if (values.empty()) throw DomainError("mixed norm of an empty trajectory");
  if (static_cast<int>(values.size()) != times.m()) throw DomainError("mixed norm: value count mismatch");
  if (q.is_infinite()) return *std::max_element(values.begin(), values.end());
  const std::vector<double> w = times.weights();
  const double qq = q.value();
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (q.reciprocal() == Rational(1, 2)) sum += w[i] * values[i] * values[i];
    else if (q.reciprocal() == Rational(1)) sum += w[i] * values[i];
    else sum += w[i] * std::pow(values[i], qq);
  }
  return std::pow(sum, 1.0 / qq);
}

double mixed_norm(const Trajectory& u, const LebesgueExponent& q, const SobolevIndex& spatial) {
  std::vector<double> vals;
  vals.reserve(u.fields.size());
  for (const Field& f : u.fields) vals.push_back(spatial_norm(f, spatial));
  return mixed_norm_from_values(u.times, vals, q);
}

Verdict is_admissible(const LebesgueExponent& q, const LebesgueExponent& r, int d) {
  if (d < 1) return {false, "dimension must be >= 1"};
  const Rational half(1, 2);
  if (q.reciprocal() > half) return {false, "q = " + q.str() + " is below 2"};
  if (r.reciprocal() > half) return {false, "r = " + r.str() + " is below 2"};
  const Rational lhs = Rational(2) * q.reciprocal() + Rational(d) * r.reciprocal();
  const Rational rhs(d, 2);
  if (lhs != rhs)
    return {false, "2/q + d/r = " + lhs.str() + " differs from d/2 = " + rhs.str()};
  if (d == 2 && q.reciprocal() == half && r.is_infinite())
    return {false, "(q, r, d) = (2, inf, 2) is the excluded endpoint"};
  return {true, "admissible"};
}

LebesgueExponent dual_exponent(const LebesgueExponent& p) { return p.dual(); }

std::vector<AdmissiblePair> enumerate_admissible_pairs(int d, int max_den) {
  if (d < 1) throw DomainError("dimension must be positive");
  if (max_den < 1) throw DomainError("max_den must be positive");
  std::vector<Rational> invs;
  for (int k = 1; k <= max_den; ++k)
    for (int j = 0; 2 * j <= k; ++j) invs.emplace_back(j, k);
  std::sort(invs.begin(), invs.end());
  invs.erase(std::unique(invs.begin(), invs.end()), invs.end());
  std::vector<AdmissiblePair> out;
  for (const Rational& ir : invs) {
    const Rational iq = Rational(d) * (Rational(1, 2) - ir) / Rational(2);
    if (iq < Rational(0) || iq > Rational(1, 2)) continue;
    const auto q = LebesgueExponent::from_reciprocal(iq), r = LebesgueExponent::from_reciprocal(ir);
    if (is_admissible(q, r, d)) out.push_back({q, r});
  }
  return out;
}

double embedding_check(const Field& f, const Rational& s, const LebesgueExponent& r, const Rational& s1,
                       const LebesgueExponent& r1) {
  const int d = f.grid().d();
  if (s > s1) throw IndexError("embedding needs s <= s1");
  if (r.is_infinite() || !(r1.reciprocal() < Rational(1)) || r1.reciprocal() < r.reciprocal())
    throw IndexError("embedding needs 1 < r1 <= r < inf");
  if (s - Rational(d) * r.reciprocal() != s1 - Rational(d) * r1.reciprocal())
    throw IndexError("embedding scaling relation s - d/r = s1 - d/r1 violated");
  const double num = sobolev_seminorm(f, s.to_double(), r);
  const double den = sobolev_seminorm(f, s1.to_double(), r1);
  if (!(den > 0.0)) throw DomainError("embedding check: zero denominator");
  return num / den;
}

void write_norm_csv_header(std::ostream& os) {
  write_csv_preamble(os, {"experiment", "d", "n", "L", "s", "r", "q", "value"});
}

void write_norm_csv_row(std::ostream& os, const NormRecord& rec) {
  os << std::setprecision(17) << rec.experiment << ',' << rec.d << ',' << rec.n << ',' << rec.L << ',' << rec.s
     << ',' << rec.r << ',' << rec.q << ',' << rec.value << '\n';
}

} // namespace platelab
