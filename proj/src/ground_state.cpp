#include "platelab/ground_state.hpp"
#include "platelab/errors.hpp"
#include "platelab/grid.hpp"
#include "platelab/version.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace platelab {

double Nonlinearity::critical_exponent(int d) {
  if (d < 3) throw DomainError("critical exponent needs d >= 3");
  return static_cast<double>(d + 2) / (d - 2);
}

double Nonlinearity::top_zero() { return 0.5 * (1.0 + std::sqrt(5.0)); }

double newton_1d(double x) {
  const double c = std::cosh(0.5 * x);
  return 1.5 / (c * c);
}

double newton_1d_d1(double x) { return -newton_1d(x) * std::tanh(0.5 * x); }

double newton_1d_d2(double x) {
  const double v = newton_1d(x);
  return v - v * v;
}

double w_1d(double x) {
  const double v = newton_1d(x);
  return -10.0 / 3.0 * v * v + 5.0 * v;
}

BLReport check_bl_conditions(int d) {
  if (d < 3) throw DomainError("Berestycki-Lions conditions are checked for d >= 3");
  BLReport rep;
  for (int e = -6; e <= -1; ++e) {
    const double s = std::pow(10.0, e);
    rep.small_ratios.emplace_back(s, Nonlinearity::g(s) / s);
  }
  const double r0 = rep.small_ratios.front().second;
  rep.small_limit_ok = std::fabs(r0 + 1.0) < 1e-5;
  const double l = Nonlinearity::critical_exponent(d);
  bool nonpos = true;
  for (double s : {1e1, 1e2, 1e3}) {
    const double q = Nonlinearity::g(s) / std::pow(s, l);
    rep.large_ratios.emplace_back(s, q);
    nonpos = nonpos && q <= 0.0;
  }
  rep.growth_ok = nonpos;
  const double disc = std::sqrt(4.5 * 4.5 - 12.0);
  rep.zeta_lo_exact = std::sqrt(0.5 * (4.5 - disc));
  rep.zeta_hi_exact = std::sqrt(0.5 * (4.5 + disc));
  const int steps = 250000;
  bool found = false;
  for (int i = 0; i <= steps; ++i) {
    const double z = 2.5 * i / steps;
    if (Nonlinearity::G(z) > 0.0) {
      if (!found) rep.zeta_lo = z;
      rep.zeta_hi = z;
      found = true;
    }
  }
  rep.positive_G_ok = found;
  return rep;
}

const char* to_string(ShotClass c) {
  switch (c) {
  case ShotClass::CrossesZero: return "CROSSES_ZERO";
  case ShotClass::TurnsBack: return "TURNS_BACK";
  case ShotClass::Escapes: return "ESCAPES";
  case ShotClass::Decays: return "DECAYS";
  }
  return "?";
}

NewtonResiduals newton_residuals_1d(int n, double L) {
  const Grid g(1, n, L);
  const Field v = Field::sample(g, [](std::span<const double> x) { return cplx(newton_1d(x[0])); });
  const Field d2 = apply_radial_multiplier(v, [](double k2) { return cplx(-k2); });
  const Field d4 = apply_radial_multiplier(v, [](double k2) { return cplx(k2 * k2); });
  NewtonResiduals res;
  for (int j = 0; j < g.n(); ++j) {
    const double x = g.coordinate(j), vv = v[j].real();
    res.second_order = std::max(res.second_order, std::abs(-d2[j] + vv - vv * vv));
    res.fourth_order = std::max(res.fourth_order, std::abs(d4[j] - vv + w_1d(x) * vv));
  }
  return res;
}

namespace {

struct RadialOde {
  int d;
  void rhs(double r, double v, double p, double& dv, double& dp) const {
    dv = p;
    dp = Nonlinearity::gt(v) - (d - 1) / r * p;
  }
  void rk4(double r, double h, double& v, double& p) const {
    double k1v, k1p, k2v, k2p, k3v, k3p, k4v, k4p;
    rhs(r, v, p, k1v, k1p);
    rhs(r + 0.5 * h, v + 0.5 * h * k1v, p + 0.5 * h * k1p, k2v, k2p);
    rhs(r + 0.5 * h, v + 0.5 * h * k2v, p + 0.5 * h * k2p, k3v, k3p);
    rhs(r + h, v + h * k3v, p + h * k3p, k4v, k4p);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  }
};

// Walks the radial trajectory node by node; visit(i, r, v, p) returns false to stop.
template <class Visit>
void integrate_radial(int d, double sigma, double dr, std::size_t max_nodes, Visit&& visit) {
  const RadialOde ode{d};
  if (!visit(std::size_t{0}, 0.0, sigma, 0.0)) return;
  const double A = Nonlinearity::gt(sigma) / (2.0 * d);
  const double B = Nonlinearity::gt_prime(sigma) * A / (4.0 * (d + 2));
  double v = sigma + A * dr * dr + B * dr * dr * dr * dr;
  double p = 2.0 * A * dr + 4.0 * B * dr * dr * dr;
  for (std::size_t i = 1; i < max_nodes; ++i) {
    const double r = dr * i;
    if (!std::isfinite(v) || !std::isfinite(p)) throw ConvergenceError("radial integration produced a non-finite value");
    if (!visit(i, r, v, p)) return;
    const int sub = static_cast<int>(std::clamp<double>(std::ceil(50.0 / i), 1.0, 50.0));
    const double h = dr / sub;
    for (int k = 0; k < sub; ++k) ode.rk4(r + k * h, h, v, p);
  }
}

constexpr double kChi[] = {126.0, -420.0, 540.0, -315.0, 70.0};

double chi(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double poly = kChi[0] + t * (kChi[1] + t * (kChi[2] + t * (kChi[3] + t * kChi[4])));
  return t * t * t * t * t * poly;
}

double chi_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = t * (1.0 - t);
  return 630.0 * a * a * a * a;
}

double tail_shape(double r, double nu) { return std::pow(r, -nu) * boost::math::cyl_bessel_k(nu, r); }
double tail_shape_prime(double r, double nu) { return -std::pow(r, -nu) * boost::math::cyl_bessel_k(nu + 1.0, r); }

} // namespace

ShotResult shoot_radial(int d, double sigma, double R, const ShootOptions& opts) {
  if (d < 3) throw DomainError("radial shooting needs d >= 3");
  if (!(sigma > 0.0)) throw DomainError("shooting height must be positive");
  if (!(opts.dr > 0.0) || !(R > opts.dr)) throw DomainError("shooting step control: need 0 < dr < R");
  const double top = Nonlinearity::top_zero();
  ShotResult res{ShotClass::Decays, R};
  const auto nodes = static_cast<std::size_t>(std::ceil(R / opts.dr)) + 1;
  double v_prev = sigma, r_prev = 0.0;
  integrate_radial(d, sigma, opts.dr, nodes, [&](std::size_t i, double r, double v, double p) {
    if (i == 0) return true;
    if (v <= 0.0) {
      res = {ShotClass::CrossesZero, r_prev + (r - r_prev) * v_prev / (v_prev - v)};
      return false;
    }
    if (p > 0.0 && v < top) {
      res = {ShotClass::TurnsBack, r};
      return false;
    }
    if (p >= 0.0 && v >= top) {
      res = {ShotClass::Escapes, r};
      return false;
    }
    if (opts.decay_floor > 0.0 && v < opts.decay_floor) {
      res = {ShotClass::Decays, r};
      return false;
    }
    v_prev = v;
    r_prev = r;
    return true;
  });
  return res;
}

RadialProfile::RadialProfile(double dr, std::vector<double> v, std::vector<double> vp)
    : dr_(dr), v_(std::move(v)), vp_(std::move(vp)) {
  if (!(dr > 0.0) || v_.size() < 2 || v_.size() != vp_.size()) throw DomainError("malformed radial profile");
}

void RadialProfile::set_tail(double c, double nu) {
  has_tail_ = true;
  tail_c_ = c;
  tail_nu_ = nu;
}

double RadialProfile::value(double r) const {
  r = std::fabs(r);
  if (r >= R()) return has_tail_ ? tail_c_ * tail_shape(r, tail_nu_) : (r == R() ? v_.back() : 0.0);
  const auto i = std::min(static_cast<std::size_t>(r / dr_), v_.size() - 2);
  const double t = (r - dr_ * i) / dr_;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * v_[i] + (t3 - 2 * t2 + t) * dr_ * vp_[i] + (-2 * t3 + 3 * t2) * v_[i + 1] +
         (t3 - t2) * dr_ * vp_[i + 1];
}

double RadialProfile::derivative(double r) const {
  const double sign = r < 0.0 ? -1.0 : 1.0;
  r = std::fabs(r);
  if (r >= R()) return sign * (has_tail_ ? tail_c_ * tail_shape_prime(r, tail_nu_) : (r == R() ? vp_.back() : 0.0));
  const auto i = std::min(static_cast<std::size_t>(r / dr_), v_.size() - 2);
  const double t = (r - dr_ * i) / dr_;
  const double t2 = t * t;
  const double d = (6 * t2 - 6 * t) / dr_ * v_[i] + (3 * t2 - 4 * t + 1) * vp_[i] + (-6 * t2 + 6 * t) / dr_ * v_[i + 1] +
                   (3 * t2 - 2 * t) * vp_[i + 1];
  return sign * d;
}

double potential_formula(int d, double v, double vp) {
  if (d == 1) return 5.0 * v - 10.0 / 3.0 * v * v;
  const double v2 = v * v, v4 = v2 * v2, v6 = v4 * v2, v8 = v4 * v4, p2 = vp * vp;
  return -5.0 * v8 + 24.0 * v6 - 33.0 * v4 + 12.0 * v2 - 20.0 * v2 * p2 + 18.0 * p2;
}

RadialProfile assemble_potential(const GroundState& gs) {
  const RadialProfile& p = gs.profile;
  const int d = gs.d;
  std::vector<double> W(p.size()), Wp(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p.r(i), v = p.values()[i], q = p.derivatives()[i];
    W[i] = potential_formula(d, v, q);
    if (d == 1) {
      Wp[i] = (5.0 - 20.0 / 3.0 * v) * q;
      continue;
    }
    // v'' from the radial equation, with the r = 0 limit
    const double vpp = (i == 0) ? Nonlinearity::gt(v) / d : Nonlinearity::gt(v) - (d - 1) / r * q;
    const double v2 = v * v;
    const double dA = -40.0 * v2 * v2 * v2 * v + 144.0 * v2 * v2 * v - 132.0 * v2 * v + 24.0 * v;
    const double B = -20.0 * v2 + 18.0;
    const double dB = -40.0 * v;
    Wp[i] = dA * q + dB * q * q * q + B * 2.0 * q * vpp;
  }
  return RadialProfile(p.dr(), std::move(W), std::move(Wp));
}

GroundState find_ground_state(int d, double tol_bracket, const GroundStateOptions& opts) {
  if (d < 3) throw DomainError("ground-state construction needs d >= 3");
  if (!(tol_bracket > 0.0)) throw DomainError("bracket tolerance must be positive");
  ShootOptions raw;
  raw.dr = opts.dr;
  raw.decay_floor = 0.0;
  const double R_shoot = 60.0;

  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  ShotClass prev = ShotClass::Escapes;
  double prev_sigma = 0.0;
  for (int k = 1; opts.scan_step * k <= opts.sigma_max + 1e-12; ++k) {
    const double s = opts.scan_step * k;
    const ShotClass c = shoot_radial(d, s, R_shoot, raw).cls;
    if (k > 1 && prev == ShotClass::TurnsBack && c == ShotClass::CrossesZero) {
      lo = prev_sigma;
      hi = s;
      bracketed = true;
      break;
    }
    prev = c;
    prev_sigma = s;
  }
  if (!bracketed) throw CertificationError("no TURNS_BACK/CROSSES_ZERO bracket found for sigma in (0, " +
                                           std::to_string(opts.sigma_max) + "]");
  GroundState gs;
  gs.d = d;
  int steps = 0;
  while (hi - lo > tol_bracket) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const ShotClass c = shoot_radial(d, mid, R_shoot, raw).cls;
    ++steps;
    if (c == ShotClass::CrossesZero) hi = mid;
    else if (c == ShotClass::TurnsBack) lo = mid;
    else {
      lo = hi = mid;
      break;
    }
  }
  gs.bracket_lo = lo;
  gs.bracket_hi = hi;
  gs.bisection_steps = steps;
  gs.sigma_star = 0.5 * (lo + hi);

  // shooting part of the profile, up to the end of the blending window
  const double dr = opts.dr;
  const auto total = static_cast<std::size_t>(std::llround(opts.R / dr)) + 1;
  std::vector<double> v(total, 0.0), vp(total, 0.0);
  std::size_t i_match = 0, i_end = 0;
  const auto blend_nodes = static_cast<std::size_t>(std::llround(opts.blend_width / dr));
  integrate_radial(d, gs.sigma_star, dr, total, [&](std::size_t i, double r, double val, double der) {
    v[i] = val;
    vp[i] = der;
    if (i > 0 && (val <= 0.0 || der >= 0.0))
      throw CertificationError("ground-state trajectory lost monotonicity at r = " + std::to_string(r) +
                               " before the matching window");
    if (i_match == 0 && i > 0 && val < opts.match_level) {
      i_match = i;
      i_end = i + blend_nodes;
    }
    return i_match == 0 || i < i_end;
  });
  if (i_match == 0 || i_end >= total) throw CertificationError("profile never reached the matching level");
  gs.r_match = dr * i_match;
  const double nu = 0.5 * (d - 2);
  gs.tail_c = v[i_match] / tail_shape(gs.r_match, nu);
  for (std::size_t i = i_match; i < total; ++i) {
    const double r = dr * i;
    const double tv = gs.tail_c * tail_shape(r, nu);
    const double tp = gs.tail_c * tail_shape_prime(r, nu);
    if (i > i_end) {
      v[i] = tv;
      vp[i] = tp;
      continue;
    }
    const double t = (r - gs.r_match) / opts.blend_width;
    const double c = chi(t), cp = chi_prime(t) / opts.blend_width;
    const double sv = v[i], sp = vp[i];
    v[i] = (1.0 - c) * sv + c * tv;
    vp[i] = (1.0 - c) * sp + c * tp + cp * (tv - sv);
  }
  gs.profile = RadialProfile(dr, std::move(v), std::move(vp));
  gs.profile.set_tail(gs.tail_c, nu);
  gs.W_profile = assemble_potential(gs);
  return gs;
}

GroundState newton_ground_state(double dr, double R) {
  const auto total = static_cast<std::size_t>(std::llround(R / dr)) + 1;
  std::vector<double> v(total), vp(total);
  for (std::size_t i = 0; i < total; ++i) {
    v[i] = newton_1d(dr * i);
    vp[i] = newton_1d_d1(dr * i);
  }
  GroundState gs;
  gs.d = 1;
  gs.sigma_star = 1.5;
  gs.bracket_lo = gs.bracket_hi = 1.5;
  gs.r_match = R;
  gs.profile = RadialProfile(dr, std::move(v), std::move(vp));
  gs.W_profile = assemble_potential(gs);
  return gs;
}

DecayFit fit_decay(const RadialProfile& p, double r_lo, double r_hi, bool absolute) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p.r(i);
    if (r < r_lo || r > r_hi) continue;
    double f = p.values()[i];
    if (absolute) f = std::fabs(f);
    if (!(f > 0.0)) continue;
    const double y = std::log(f);
    sx += r;
    sy += y;
    sxx += r * r;
    sxy += r * y;
    ++n;
  }
  if (n < 2) throw DomainError("decay fit needs at least two positive samples");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  return {std::exp(icpt), -slope};
}

namespace {

// even extension of the node values
struct Stencils {
  const std::vector<double>& v;
  std::size_t k;
  double H;
  double at(std::ptrdiff_t i) const { return v[static_cast<std::size_t>(i < 0 ? -i : i)]; }
  double d2(std::ptrdiff_t i) const {
    const auto K = static_cast<std::ptrdiff_t>(k);
    return (-at(i - 2 * K) + 16 * at(i - K) - 30 * at(i) + 16 * at(i + K) - at(i + 2 * K)) / (12 * H * H);
  }
  double d3(std::ptrdiff_t i) const {
    const auto K = static_cast<std::ptrdiff_t>(k);
    return (at(i - 3 * K) - 8 * at(i - 2 * K) + 13 * at(i - K) - 13 * at(i + K) + 8 * at(i + 2 * K) -
            at(i + 3 * K)) /
           (8 * H * H * H);
  }
  double d4(std::ptrdiff_t i) const {
    const auto K = static_cast<std::ptrdiff_t>(k);
    return (-at(i - 3 * K) + 12 * at(i - 2 * K) - 39 * at(i - K) + 56 * at(i) - 39 * at(i + K) +
            12 * at(i + 2 * K) - at(i + 3 * K)) /
           (6 * H * H * H * H);
  }
};

std::size_t stencil_step(const RadialProfile& p, double H) {
  const auto k = static_cast<std::size_t>(std::llround(H / p.dr()));
  if (k < 1) throw DomainError("stencil spacing below the profile spacing");
  return k;
}

} // namespace

double second_order_residual(const GroundState& gs, double r_max, double H) {
  const RadialProfile& p = gs.profile;
  const std::size_t k = stencil_step(p, H);
  const Stencils st{p.values(), k, p.dr() * k};
  const int d = gs.d;
  double worst = 0.0;
  for (std::size_t i = 0; i + 2 * k < p.size() && p.r(i) <= r_max + 1e-12; ++i) {
    const auto ii = static_cast<std::ptrdiff_t>(i);
    const double v = p.values()[i], q = p.derivatives()[i], r = p.r(i);
    double res;
    if (d == 1) res = -st.d2(ii) + v - v * v;
    else if (i == 0) res = d * st.d2(ii) - Nonlinearity::gt(v);
    else res = st.d2(ii) + (d - 1) / r * q - Nonlinearity::gt(v);
    worst = std::max(worst, std::fabs(res));
  }
  return worst;
}

FourthOrderReport verify_fourth_order(const GroundState& gs, double r_max, double H, double v_floor) {
  const RadialProfile& p = gs.profile;
  const RadialProfile& Wp = gs.W_profile;
  if (Wp.size() != p.size()) throw DomainError("potential profile does not match the ground-state profile");
  const std::size_t k = stencil_step(p, H);
  const Stencils st{p.values(), k, p.dr() * k};
  const int d = gs.d;
  FourthOrderReport rep;
  rep.r_max = r_max;
  for (std::size_t i = 0; i + 3 * k < p.size() && p.r(i) <= r_max + 1e-12; ++i) {
    const double v = p.values()[i];
    if (v <= v_floor) break;
    const auto ii = static_cast<std::ptrdiff_t>(i);
    const double r = p.r(i), q = p.derivatives()[i], W = Wp.values()[i];
    const double D2 = st.d2(ii), D4 = st.d4(ii);
    double bil, lap;
    if (d == 1) {
      bil = D4;
      lap = D2;
    } else if (i == 0) {
      bil = D4 * d * (d + 2) / 3.0;
      lap = d * D2;
    } else {
      const double D3 = st.d3(ii);
      const double c = (d - 1.0) * (d - 3.0);
      bil = D4 + 2.0 * (d - 1) / r * D3 + c / (r * r) * D2 - c / (r * r * r) * q;
      lap = D2 + (d - 1) / r * q;
    }
    rep.fd_residual = std::max(rep.fd_residual, std::fabs(bil - v + W * v));
    double inter;
    if (d == 1) inter = bil - v + 3 * v * v - 2 * v * v * v + 2 * q * q;
    else {
      const double v2 = v * v, q2 = q * q;
      inter = bil - lap + 18 * v * q2 + 9 * v2 * lap - 20 * v2 * v * q2 - 5 * v2 * v2 * lap;
    }
    rep.intermediate_residual = std::max(rep.intermediate_residual, std::fabs(inter));
  }
  if (d == 1 || d == 3) {
    // 1-D spectral grid: v itself for d = 1, the odd function x v(|x|) for d = 3
    const Grid g(1, 4096, 48.0);
    Field phi = Field::sample(g, [&](std::span<const double> x) {
      return cplx(d == 1 ? p.value(x[0]) : x[0] * p.value(x[0]));
    });
    Field d4 = apply_radial_multiplier(phi, [](double k2) { return cplx(k2 * k2); });
    for (int j = 0; j < g.n(); ++j) {
      const double x = g.coordinate(j), r = std::fabs(x);
      if (r > r_max) continue;
      const double v = p.value(r);
      if (v <= v_floor) continue;
      if (d == 3 && r < 0.1) continue;
      const double bil = d == 1 ? d4[j].real() : d4[j].real() / x;
      rep.spectral_residual = std::max(rep.spectral_residual, std::fabs(bil - v + Wp.value(r) * v));
    }
  }
  return rep;
}

void write_profile_csv(std::ostream& os, const GroundState& gs, double r_step) {
  write_csv_preamble(os, {"r", "v", "v_prime", "W"});
  os << std::setprecision(17);
  const auto n = static_cast<std::size_t>(std::llround(gs.profile.R() / r_step));
  for (std::size_t i = 0; i <= n; ++i) {
    const double r = std::min(r_step * i, gs.profile.R());
    os << r << ',' << gs.profile.value(r) << ',' << gs.profile.derivative(r) << ',' << gs.W_profile.value(r) << '\n';
  }
}

} // namespace platelab
