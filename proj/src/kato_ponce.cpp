#include "platelab/kato_ponce.hpp"
#include "platelab/errors.hpp"
#include "platelab/version.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace platelab {

namespace {

const Rational kZero(0), kOne(1);

bool open_unit(const LebesgueExponent& r) { return r.reciprocal() > kZero && r.reciprocal() < kOne; }

} // namespace

Verdict validate_kp_indices(const KPIndices& idx) {
  if (!open_unit(idx.r)) return {false, "r = " + idx.r.str() + " must lie in (1, inf)"};
  if (!open_unit(idx.r2)) return {false, "r2 = " + idx.r2.str() + " must lie in (1, inf)"};
  if (!open_unit(idx.r3)) return {false, "r3 = " + idx.r3.str() + " must lie in (1, inf)"};
  const Rational a = idx.r1.reciprocal() + idx.r2.reciprocal();
  const Rational b = idx.r3.reciprocal() + idx.r4.reciprocal();
  if (a != idx.r.reciprocal())
    return {false, "1/r1 + 1/r2 = " + a.str() + " differs from 1/r = " + idx.r.reciprocal().str()};
  if (b != idx.r.reciprocal())
    return {false, "1/r3 + 1/r4 = " + b.str() + " differs from 1/r = " + idx.r.reciprocal().str()};
  if (idx.r1.reciprocal() == kOne || idx.r4.reciprocal() == kOne) return {false, "r1 and r4 must exceed 1"};
  return {true, "valid"};
}

Verdict validate_holder_indices(const HolderIndices& idx, int d) {
  if (d < 1) return {false, "dimension must be >= 1"};
  if (!open_unit(idx.r)) return {false, "r = " + idx.r.str() + " must lie in (1, inf)"};
  if (!open_unit(idx.r1)) return {false, "r1 = " + idx.r1.str() + " must lie in (1, inf)"};
  if (!open_unit(idx.r2)) return {false, "r2 = " + idx.r2.str() + " must lie in (1, inf)"};
  if (idx.s < kZero) return {false, "s must be >= 0"};
  if (idx.s > idx.s1 || idx.s > idx.s2) return {false, "s must not exceed min(s1, s2)"};
  const Rational rhs = idx.r1.reciprocal() + idx.r2.reciprocal() + (idx.s - idx.s1 - idx.s2) / Rational(d);
  if (rhs != idx.r.reciprocal())
    return {false, "1/r1 + 1/r2 + (s - s1 - s2)/d = " + rhs.str() + " differs from 1/r = " +
                       idx.r.reciprocal().str()};
  return {true, "valid"};
}

Verdict holder_embedding_hypotheses(const HolderIndices& idx, int d) {
  if (d < 1) return {false, "dimension must be >= 1"};
  const Rational dd(d);
  if (idx.s1 > kZero && !(idx.s1 < dd * idx.r1.reciprocal()))
    return {false, "s1 = " + idx.s1.str() + " is not below d/r1 = " + (dd * idx.r1.reciprocal()).str()};
  if (idx.s2 > kZero && !(idx.s2 < dd * idx.r2.reciprocal()))
    return {false, "s2 = " + idx.s2.str() + " is not below d/r2 = " + (dd * idx.r2.reciprocal()).str()};
  return {true, "embedding hypotheses hold"};
}

namespace {

Field derivative(const Field& f, double s) {
  if (s == 0.0) return to_rep(f, Rep::Space);
  const double hs = 0.5 * s;
  return inverse_transform(apply_radial_multiplier(to_rep(f, Rep::Spectral), [hs](double k2) {
    return cplx(k2 == 0.0 ? 0.0 : std::pow(k2, hs));
  }));
}

double kp_from_fields(const Field& fg_s, const Field& f, const Field& f_s, const Field& g, const Field& g_s,
                      const KPIndices& idx) {
  const double num = lebesgue_norm(fg_s, idx.r);
  const double den = lebesgue_norm(f, idx.r1) * lebesgue_norm(g_s, idx.r2) +
                     lebesgue_norm(f_s, idx.r3) * lebesgue_norm(g, idx.r4);
  if (!(den > 0.0)) throw DomainError("Kato-Ponce ratio: right-hand side vanishes");
  return num / den;
}

} // namespace

double kp_ratio(const Field& f, const Field& g, double s, const KPIndices& idx) {
  if (!(s >= 0.0)) throw DomainError("Kato-Ponce ratio needs s >= 0");
  if (auto v = validate_kp_indices(idx); !v) throw IndexError(v.diagnostic);
  const Field fs = to_rep(f, Rep::Space), gs = to_rep(g, Rep::Space);
  const Field fg = pointwise_product(fs, gs);
  return kp_from_fields(derivative(fg, s), fs, derivative(fs, s), gs, derivative(gs, s), idx);
}

double kp_ratio(const TestFunction& f, const TestFunction& g, double s, const KPIndices& idx, const Grid& grid) {
  return kp_ratio(f.sample(grid), g.sample(grid), s, idx);
}

double holder_ratio(const Field& f, const Field& g, const HolderIndices& idx) {
  if (auto v = validate_holder_indices(idx, f.grid().d()); !v) throw IndexError(v.diagnostic);
  const Field fs = to_rep(f, Rep::Space), gs = to_rep(g, Rep::Space);
  const Field fg = pointwise_product(fs, gs);
  const double num = sobolev_seminorm(fg, idx.s.to_double(), idx.r);
  const double den =
      sobolev_seminorm(fs, idx.s1.to_double(), idx.r1) * sobolev_seminorm(gs, idx.s2.to_double(), idx.r2);
  if (!(den > 0.0)) throw DomainError("Hölder ratio: right-hand side vanishes");
  return num / den;
}

double holder_ratio(const TestFunction& f, const TestFunction& g, const HolderIndices& idx, const Grid& grid) {
  return holder_ratio(f.sample(grid), g.sample(grid), idx);
}

Grid dilation_grid(const Grid& base, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
  const double L = base.L() * std::max(1.0, 1.0 / lambda);
  const double h = base.h() * std::min(1.0, 1.0 / lambda);
  int n = static_cast<int>(std::ceil(2.0 * L / h - 1e-9));
  if (n % 2) ++n;
  return Grid(base.d(), n, L);
}

double dilation_scaling_check(const TestFunction& f, double lambda, double s, const LebesgueExponent& r,
                              const Grid& base, double resolution_tol) {
  const Field a = f.sample(base);
  require_resolved(a, resolution_tol, "dilation check (original)");
  const Grid g2 = dilation_grid(base, lambda);
  const Field b = f.dilate(lambda).sample(g2);
  require_resolved(b, resolution_tol, "dilation check (dilated)");
  const double d = base.d();
  const double expo = s - (r.is_infinite() ? 0.0 : d * r.reciprocal().to_double());
  const double na = sobolev_seminorm(a, s, r);
  if (!(na > 0.0)) throw DomainError("dilation check: zero norm");
  return sobolev_seminorm(b, s, r) / (std::pow(lambda, expo) * na);
}

std::vector<KPTuple> standard_kp_tuples() {
  auto L = [](const char* t) { return LebesgueExponent::parse(t); };
  return {
      {"kp-a", {L("2"), L("4"), L("4"), L("4"), L("4")}},
      {"kp-b", {L("2"), L("inf"), L("2"), L("2"), L("inf")}},
      {"kp-c", {L("4/3"), L("2"), L("4"), L("4"), L("2")}},
  };
}

std::vector<HolderTuple> standard_holder_tuples(int d) {
  auto L = [](const char* t) { return LebesgueExponent::parse(t); };
  std::vector<HolderTuple> out;
  // candidates per s with s = s1 = s2; kept only if both the relation and the embedding hypotheses hold
  const std::vector<std::pair<int, HolderIndices>> cand{
      {0, {L("2"), L("4"), L("4"), Rational(0), Rational(0), Rational(0)}},
      {1, {L("2"), L("12/5"), L("12/5"), Rational(1), Rational(1), Rational(1)}},
      {2, {L("6/5"), L("4/3"), L("4/3"), Rational(2), Rational(2), Rational(2)}},
  };
  for (const auto& [s, h] : cand)
    if (validate_holder_indices(h, d) && holder_embedding_hypotheses(h, d)) out.push_back({"holder-" + std::to_string(s), h});
  return out;
}

Grid kp_ensemble_grid(int d) {
  if (d == 1) return Grid(1, 4096, 96.0);
  if (d == 3) return Grid(3, 48, 9.0);
  throw DomainError("Kato-Ponce ensembles are configured for d = 1 and d = 3");
}

EnsembleSpec kp_ensemble_spec(int d, const Grid& grid) {
  EnsembleSpec e;
  e.d = d;
  e.max_terms = 2;
  if (d == 1) {
    e.width_min = 0.5;
    e.width_max = 4.0;
    e.center_max = 0.5 * grid.L();
    e.modulation_max = 0.25 * grid.nyquist();
    e.poly_coeff_max = 0.5;
  } else {
    e.width_min = 0.8;
    e.width_max = 1.25;
    e.center_max = 1.0;
    e.modulation_max = 0.5;
    e.poly_coeff_max = 0.3;
  }
  return e;
}

namespace {

class MemberCache {
public:
  MemberCache(Field f, Field g) {
    Field fg = pointwise_product(f, g);
    space_.push_back(std::move(f));
    space_.push_back(std::move(g));
    space_.push_back(std::move(fg));
    for (auto& x : space_) spec_.push_back(forward_transform(x));
  }

  // which: 0 = f, 1 = g, 2 = fg
  double norm(int which, double s, const LebesgueExponent& r) {
    auto key = std::make_tuple(which, s, r.reciprocal());
    auto it = norms_.find(key);
    if (it != norms_.end()) return it->second;
    const double v = lebesgue_norm(field(which, s), r);
    norms_.emplace(key, v);
    return v;
  }

private:
  const Field& field(int which, double s) {
    if (s == 0.0) return space_[which];
    auto key = std::make_pair(which, s);
    auto it = deriv_.find(key);
    if (it != deriv_.end()) return it->second;
    const double hs = 0.5 * s;
    Field d = inverse_transform(apply_radial_multiplier(spec_[which], [hs](double k2) {
      return cplx(k2 == 0.0 ? 0.0 : std::pow(k2, hs));
    }));
    return deriv_.emplace(key, std::move(d)).first->second;
  }

  std::vector<Field> space_;
  std::vector<Field> spec_;
  std::map<std::pair<int, double>, Field> deriv_;
  std::map<std::tuple<int, double, Rational>, double> norms_;
};

std::string describe(const KPIndices& i) {
  return i.r.str() + ";" + i.r1.str() + ";" + i.r2.str() + ";" + i.r3.str() + ";" + i.r4.str();
}

std::string describe(const HolderIndices& i) {
  return i.r.str() + ";" + i.r1.str() + ";" + i.r2.str() + ";s1=" + i.s1.str() + ";s2=" + i.s2.str();
}

} // namespace

std::vector<KPSample> run_kp_ensemble(const KPEnsembleOptions& opts) {
  const Grid grid = kp_ensemble_grid(opts.d);
  const EnsembleSpec spec = kp_ensemble_spec(opts.d, grid);
  const auto kp = standard_kp_tuples();
  const auto holder = standard_holder_tuples(opts.d);
  std::mt19937_64 rng(opts.seed);
  std::vector<KPSample> out;
  for (int m = 0; m < opts.count; ++m) {
    const TestFunction f = random_test_function(rng, spec);
    const TestFunction g = random_test_function(rng, spec);
    MemberCache c(f.sample(grid), g.sample(grid));
    for (double s : opts.s_values) {
      for (const auto& t : kp) {
        const double num = c.norm(2, s, t.idx.r);
        const double den = c.norm(0, 0.0, t.idx.r1) * c.norm(1, s, t.idx.r2) +
                           c.norm(0, s, t.idx.r3) * c.norm(1, 0.0, t.idx.r4);
        out.push_back({t.id, opts.d, s, describe(t.idx), opts.seed, m, num / den});
      }
      for (const auto& t : holder) {
        if (t.idx.s.to_double() != s) continue;
        const double num = c.norm(2, s, t.idx.r);
        const double den = c.norm(0, t.idx.s1.to_double(), t.idx.r1) * c.norm(1, t.idx.s2.to_double(), t.idx.r2);
        out.push_back({t.id, opts.d, s, describe(t.idx), opts.seed, m, num / den});
      }
    }
  }
  return out;
}

std::string fixture_key(const std::string& tuple_id, int d, double s) {
  std::ostringstream os;
  os << tuple_id << '|' << d << '|' << s;
  return os.str();
}

std::map<std::string, double> max_ratios(const std::vector<KPSample>& samples) {
  std::map<std::string, double> out;
  for (const auto& s : samples) {
    auto& v = out[fixture_key(s.tuple_id, s.d, s.s)];
    v = std::max(v, s.ratio);
  }
  return out;
}

void write_kp_csv_header(std::ostream& os) {
  write_csv_preamble(os, {"tuple_id", "d", "s", "indices", "seed", "member", "ratio"});
}

void write_kp_csv_row(std::ostream& os, const KPSample& s) {
  os << std::setprecision(17) << s.tuple_id << ',' << s.d << ',' << s.s << ',' << s.indices << ',' << s.seed << ','
     << s.member << ',' << s.ratio << '\n';
}

void write_fixture(std::ostream& os, const std::map<std::string, double>& constants, std::uint64_t seed,
                   int count) {
  os << "# platelab " << kVersion << " calibration seed=" << seed << " count=" << count << '\n';
  os << "key,constant\n" << std::setprecision(17);
  for (const auto& [k, v] : constants) os << k << ',' << v << '\n';
}

std::map<std::string, double> read_fixture(std::istream& is) {
  std::map<std::string, double> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("key,", 0) == 0) continue;
    auto comma = line.rfind(',');
    if (comma == std::string::npos) throw DomainError("malformed fixture line '" + line + "'");
    out[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
  }
  return out;
}

} // namespace platelab
