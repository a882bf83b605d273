#pragma once

#include "platelab/grid.hpp"
#include "platelab/rational.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace platelab {

/// Regularity s with integrability r; homogeneous uses |xi|^s, otherwise
/// (1 + |xi|^2)^{s/2}.
struct SobolevIndex {
  double s = 0.0;
  LebesgueExponent r;
  bool homogeneous = true;
};

/// Uniform nodes on [0, T_end] with composite trapezoid weights.
class TimeGrid {
public:
  TimeGrid(double T_end, int m);

  double T_end() const noexcept { return T_end_; }
  int m() const noexcept { return m_; }
  double step() const noexcept { return T_end_ / (m_ - 1); }
  double node(int i) const noexcept { return i == m_ - 1 ? T_end_ : i * step(); }
  std::vector<double> nodes() const;
  std::vector<double> weights() const;
  /// Grid made of the first count nodes (same spacing).
  TimeGrid prefix(int count) const;

private:
  double T_end_;
  int m_;
};

struct Trajectory {
  TimeGrid times;
  std::vector<Field> fields;

  Trajectory(TimeGrid t, std::vector<Field> f);
  const Grid& grid() const { return fields.front().grid(); }
};

double lebesgue_norm(const Field& f, const LebesgueExponent& r);
/// ||f||_{L^r} for a raw array of samples with cell volume dv.
double lebesgue_norm(std::span<const cplx> values, double dv, const LebesgueExponent& r);

/// || |D|^s f ||_{L^r}; zero mode annihilated for s > 0, passed for s = 0.
double sobolev_seminorm(const Field& f, double s, const LebesgueExponent& r);
/// || <D>^s f ||_{L^r}, any real s.
double sobolev_norm(const Field& f, double s, const LebesgueExponent& r);
double spatial_norm(const Field& f, const SobolevIndex& idx);

/// ||.||_{L^q_I X} from per-node spatial norms and trapezoid weights.
double mixed_norm_from_values(const TimeGrid& times, std::span<const double> values, const LebesgueExponent& q);
double mixed_norm(const Trajectory& u, const LebesgueExponent& q, const SobolevIndex& spatial);

struct Verdict {
  bool ok = false;
  std::string diagnostic;
  explicit operator bool() const noexcept { return ok; }
};

/// 2 <= q, r <= inf, 2/q + d/r = d/2, (q, r, d) != (2, inf, 2).
Verdict is_admissible(const LebesgueExponent& q, const LebesgueExponent& r, int d);
LebesgueExponent dual_exponent(const LebesgueExponent& p);

struct AdmissiblePair {
  LebesgueExponent q, r;
};
/// Every admissible (q, r) with 1/r = j/k, k <= max_den, ordered by 1/r.
std::vector<AdmissiblePair> enumerate_admissible_pairs(int d, int max_den);

/// ||f||_{W^{s,r}} / ||f||_{W^{s1,r1}} under s - d/r = s1 - d/r1.
double embedding_check(const Field& f, const Rational& s, const LebesgueExponent& r, const Rational& s1,
                       const LebesgueExponent& r1);

struct NormRecord {
  std::string experiment;
  int d = 0;
  int n = 0;
  double L = 0.0;
  double s = 0.0;
  std::string r;
  std::string q;
  double value = 0.0;
};

void write_norm_csv_header(std::ostream& os);
void write_norm_csv_row(std::ostream& os, const NormRecord& rec);

} // namespace platelab
