#pragma once

#include "platelab/grid.hpp"
#include "platelab/norms.hpp"

#include <string>
#include <vector>

namespace platelab {

struct PlateState {
  Field u;  ///< displacement
  Field ut; ///< velocity
  double t = 0.0;
};

/// e^{it Delta}: multiplier e^{-it|xi|^2}.
Field schrodinger_flow(const Field& u0, double t);
/// cos(t Delta): multiplier cos(t|xi|^2).
Field plate_cos(const Field& u0, double t);
/// sin(t Delta)/Delta: multiplier sin(t|xi|^2)/|xi|^2, equal to t at xi = 0.
Field plate_sinc(const Field& u1, double t);
PlateState free_plate_solution(const Field& u0, const Field& u1, double t);

/// int_0^t sin((t-s)Delta)/Delta F(s) ds with F linear between nodes and the
/// kernel integrated exactly. Second order in the node spacing.
Field duhamel(const Trajectory& F, double t);

/// Coefficients of one step of length h for U'' + w^2 U = G, G linear on the
/// step (G0 at the start, G1 at the end):
///   U+ = c U + sw P + a0 G0 + a1 G1,   P+ = -ws U + c P + b0 G0 + b1 G1.
struct StepWeights {
  double c = 1.0;
  double sw = 0.0; ///< sin(wh)/w
  double ws = 0.0; ///< w sin(wh)
  double a0 = 0.0, a1 = 0.0, b0 = 0.0, b1 = 0.0;
};
StepWeights step_weights(double omega, double h);

/// Applies step_weights mode by mode on spectral arrays.
class PlateStepper {
public:
  PlateStepper(const Grid& grid, double h);

  double h() const noexcept { return h_; }
  /// Advances (U, P) by one step; G0/G1 may be null for zero forcing.
  void step(std::vector<cplx>& U, std::vector<cplx>& P, const std::vector<cplx>* G0,
            const std::vector<cplx>* G1) const;

private:
  double h_;
  std::vector<StepWeights> w_;
};

/// One "field_NNNNN.txt" per node plus "index.txt" listing node, time, file.
void export_trajectory(const Trajectory& traj, const std::string& directory);

} // namespace platelab
