#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace platelab {

/// g(s) = -s + 3s^3 - s^5 and its primitive G; the radial equation is
/// v'' + (d-1)/r v' = gt(v) with gt = -g.
struct Nonlinearity {
  static double g(double s) { return -s + 3.0 * s * s * s - s * s * s * s * s; }
  static double G(double s) {
    const double s2 = s * s;
    return -0.5 * s2 + 0.75 * s2 * s2 - s2 * s2 * s2 / 6.0;
  }
  static double gt(double v) { return -g(v); }
  static double gt_prime(double v) { return 1.0 - 9.0 * v * v + 5.0 * v * v * v * v; }
  static constexpr int p1 = 3;
  static constexpr int p2 = 5;
  /// (d + 2)/(d - 2) for d >= 3.
  static double critical_exponent(int d);
  /// Largest zero of gt, (1 + sqrt 5)/2: above it the radial flow escapes.
  static double top_zero();
};

/// 1-D closed form v = (3/2)/cosh^2(x/2) solving -v'' + v - v^2 = 0.
double newton_1d(double x);
double newton_1d_d1(double x);
double newton_1d_d2(double x);
/// W = -(10/3) v^2 + 5 v, making v'''' - v + W v = 0.
double w_1d(double x);

struct NewtonResiduals {
  double second_order = 0.0; ///< max |-v'' + v - v^2|
  double fourth_order = 0.0; ///< max |v'''' - v + W v|
};
/// Spectral derivatives of the sampled closed form on a 1-D grid.
NewtonResiduals newton_residuals_1d(int n = 2048, double L = 40.0);

struct BLReport {
  std::vector<std::pair<double, double>> small_ratios; ///< (s, g(s)/s), s = 1e-6 .. 1e-1
  bool small_limit_ok = false;
  std::vector<std::pair<double, double>> large_ratios; ///< (s, g(s)/s^l)
  bool growth_ok = false;
  double zeta_lo = 0.0, zeta_hi = 0.0;               ///< scanned interval with G > 0
  double zeta_lo_exact = 0.0, zeta_hi_exact = 0.0;   ///< from z^2 - 4.5 z + 3 = 0
  bool positive_G_ok = false;
  bool all_pass() const { return small_limit_ok && growth_ok && positive_G_ok; }
};

BLReport check_bl_conditions(int d);

enum class ShotClass { CrossesZero, TurnsBack, Escapes, Decays };
const char* to_string(ShotClass c);

struct ShootOptions {
  double dr = 1e-3;
  /// Trajectories dropping below this level before any event are DECAYS;
  /// zero disables the check.
  double decay_floor = 1e-7;
};

struct ShotResult {
  ShotClass cls = ShotClass::Decays;
  double r_event = 0.0;
};

/// Integrates v'' + (d-1)/r v' = gt(v), v(0) = sigma, v'(0) = 0 by RK4 from a
/// Taylor start and classifies the first event.
ShotResult shoot_radial(int d, double sigma, double R, const ShootOptions& opts = {});

/// Values and derivatives on uniform nodes r_i = i dr, cubic Hermite in between.
/// Beyond the last node an optional tail c r^{-nu} K_nu(r) is used, else 0.
class RadialProfile {
public:
  RadialProfile() = default;
  RadialProfile(double dr, std::vector<double> v, std::vector<double> vp);

  double dr() const noexcept { return dr_; }
  double R() const noexcept { return dr_ * (v_.size() - 1); }
  std::size_t size() const noexcept { return v_.size(); }
  const std::vector<double>& values() const noexcept { return v_; }
  const std::vector<double>& derivatives() const noexcept { return vp_; }
  double r(std::size_t i) const noexcept { return dr_ * i; }

  double value(double r) const;
  double derivative(double r) const;
  void set_tail(double c, double nu);

private:
  double dr_ = 0.0;
  std::vector<double> v_, vp_;
  bool has_tail_ = false;
  double tail_c_ = 0.0, tail_nu_ = 0.0;
};

struct GroundStateOptions {
  double dr = 1e-3;
  double R = 40.0;
  double match_level = 1e-4; ///< tail matching starts where v first drops below this
  double blend_width = 1.0;
  double sigma_max = 3.0;
  double scan_step = 0.05;
};

struct GroundState {
  int d = 3;
  RadialProfile profile;
  RadialProfile W_profile;
  double sigma_star = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  int bisection_steps = 0;
  double r_match = 0.0;
  double tail_c = 0.0;
};

/// Bisection on the shooting height between a TURNS_BACK and a CROSSES_ZERO
/// witness, tail matching and assembly of W.
GroundState find_ground_state(int d, double tol_bracket = 1e-12, const GroundStateOptions& opts = {});
/// The closed-form 1-D profile and its potential on [0, R].
GroundState newton_ground_state(double dr = 1e-3, double R = 40.0);

/// W = -5v^8 + 24v^6 - 33v^4 + 12v^2 - 20 v^2 |v'|^2 + 18 |v'|^2 (d >= 3),
/// W = 5v - (10/3) v^2 (d = 1).
RadialProfile assemble_potential(const GroundState& gs);
double potential_formula(int d, double v, double vp);

struct DecayFit {
  double C = 0.0;
  double delta = 0.0;
};
/// Least-squares fit of log f = log C - delta r on profile nodes in [r_lo, r_hi].
DecayFit fit_decay(const RadialProfile& p, double r_lo, double r_hi, bool absolute = false);

/// Max |v'' + (d-1)/r v' - gt(v)| on nodes in [0, r_max], 4th-order stencils
/// of spacing H (a multiple of dr).
double second_order_residual(const GroundState& gs, double r_max, double H = 0.01);

struct FourthOrderReport {
  double fd_residual = 0.0;           ///< Delta^2 v - v + W v by radial stencils
  double intermediate_residual = 0.0; ///< intermediate identity by the same stencils
  double spectral_residual = 0.0;     ///< cross-check on a 1-D spectral grid (d = 1, 3)
  double r_max = 0.0;
  bool pass(double tol) const { return fd_residual < tol && intermediate_residual < tol && spectral_residual < tol; }
};

FourthOrderReport verify_fourth_order(const GroundState& gs, double r_max = 15.0, double H = 0.01,
                                      double v_floor = 1e-8);

void write_profile_csv(std::ostream& os, const GroundState& gs, double r_step = 0.01);

} // namespace platelab
