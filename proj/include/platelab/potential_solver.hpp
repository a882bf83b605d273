#pragma once

#include "platelab/grid.hpp"
#include "platelab/ground_state.hpp"
#include "platelab/norms.hpp"
#include "platelab/propagators.hpp"
#include "platelab/rational.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace platelab {

/// (alpha, beta, s) of the class L^alpha_I W^{s-2, beta}.
struct ClassIndices {
  Rational alpha{2};
  Rational beta{3};
  Rational s{2};
};

enum class PotentialKind { StaticProfile, PiecewiseRescaled, Callable };

/// Real potential V(t, x) sampled on the solver grid.
class PotentialSpec {
public:
  using Evaluator = std::function<Field(double t)>;

  static PotentialSpec zero(const Grid& grid);
  static PotentialSpec static_profile(Field V, ClassIndices cls = {});
  /// V = pieces[k] on [breakpoints[k], breakpoints[k+1]); left limit at breakpoints.
  static PotentialSpec piecewise(std::vector<double> breakpoints, std::vector<Field> pieces, ClassIndices cls = {});
  static PotentialSpec callable(const Grid& grid, Evaluator eval, ClassIndices cls = {});

  PotentialKind kind() const noexcept { return kind_; }
  const ClassIndices& indices() const noexcept { return cls_; }
  const Grid& grid() const noexcept { return grid_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  /// Value at time t; at a breakpoint, right_limit selects the piece that
  /// starts there instead of the one that ends there.
  Field at(double t, bool right_limit = false) const;
  bool is_zero() const noexcept { return zero_; }

private:
  explicit PotentialSpec(const Grid& g) : grid_(g) {}
  PotentialKind kind_ = PotentialKind::StaticProfile;
  Grid grid_;
  ClassIndices cls_;
  bool zero_ = false;
  std::vector<Field> fields_;
  std::vector<double> breakpoints_;
  Evaluator eval_;
};

enum class InitialGuess { Free, Zero };

struct SolverOptions {
  double tol = 1e-10;          ///< relative change in the working norm
  int max_subdivision = 12;
  int max_picard_iters = 50;
  double time_offset = 0.0;    ///< solver time t maps to potential/forcing time t + offset
  InitialGuess initial_guess = InitialGuess::Free;
  double contraction_target = 0.5;
};

struct PlateProblem {
  Field u0;
  Field u1;
  std::optional<Trajectory> forcing; ///< on the same time grid, empty for F = 0
  PotentialSpec potential;
  TimeGrid times;
};

struct SubintervalReport {
  double t_start = 0.0, t_end = 0.0;
  int depth = 0;
  int iterations = 0;
  double contraction_factor = 0.0;
  double final_residual = 0.0;
};

struct SolveReport {
  Trajectory trajectory;
  PlateState final_state; ///< (u, u_t) at T_end
  std::vector<SubintervalReport> subintervals;
};

/// Picard iteration of v -> free flow + Duhamel[F - V v] on subintervals,
/// halved until the measured contraction factor drops below the target.
SolveReport picard_solve(const PlateProblem& problem, const SolverOptions& opts = {});

/// Working norm: max over nodes of ||v||_{H^s} and, for d >= 3, the discrete
/// L^2 in time of ||v||_{W^{s, 2d/(d-2)}}.
double working_norm(const std::vector<Field>& nodes_spectral, const TimeGrid& times, double s);

void write_solve_report(std::ostream& os, const SolveReport& rep);

struct RegimePair {
  LebesgueExponent q0, r0;
  bool alpha_at_least_two = true;
  Verdict admissible;
};
/// (q0, r0) used in the contraction argument for the given class indices.
RegimePair classify_regime(const ClassIndices& cls, int d);

/// e^{i eps^2 t} v(eps |x|); the profile at the box boundary must be below tail_tol.
Field standing_wave(const GroundState& gs, double eps, double t, const Grid& grid, double tail_tol = 1e-12);
/// eps^4 W(eps |x|).
Field rescaled_potential(const RadialProfile& W, double eps, const Grid& grid);

} // namespace platelab
