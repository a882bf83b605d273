#pragma once

#include "platelab/grid.hpp"
#include "platelab/norms.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace platelab {

enum class FlowVariant { Schrodinger, PlateCosInput, PlateSincInput };
const char* to_string(FlowVariant v);

/// ||e^{it Delta} u0||_{L^r} |t|^{d(1/2 - 1/r)} / ||u0||_{L^{r'}}.
double fixed_time_ratio(const Field& u0, double t, const LebesgueExponent& r);

/// Sweep of fixed_time_ratio; every t must satisfy |t| <= L^2/10 (torus
/// validity window), else ResourceError.
std::vector<double> dispersive_sweep(const Field& u0, const std::vector<double>& times, const LebesgueExponent& r);

/// Per-node ||flow(t) data||_{W^{s, r_k}} for each requested r_k (outer index k).
/// Schrodinger: e^{-it|xi|^2}; PlateCosInput: cos(t|xi|^2); PlateSincInput:
/// sin(t|xi|^2)/|xi|^2 on mean-zero data.
std::vector<std::vector<double>> free_flow_norms(const Field& data, FlowVariant variant, double s,
                                                 const std::vector<LebesgueExponent>& rs, const TimeGrid& I);

/// ||u0||_{H^s} (Schrodinger, cosine) or ||u1||_{H^{s-2}} (sinc input).
double strichartz_denominator(const Field& data, FlowVariant variant, double s);

/// Closed-form e^{it Delta} of exp(-|x|^2/(2 w^2)) on the torus [-L, L)^d,
/// periodized by the method of images (axis by axis).
cplx periodized_gaussian_flow(std::span<const double> x, double width, double t, double L);

/// Mixed-norm quotient of the free flow; the pair must be admissible.
double strichartz_quotient_free(const Field& data, const LebesgueExponent& q, const LebesgueExponent& r, double s,
                                const TimeGrid& I, FlowVariant variant);
/// Same quotient without the admissibility check (for deliberate violations).
double strichartz_quotient_unchecked(const Field& data, const LebesgueExponent& q, const LebesgueExponent& r,
                                     double s, const TimeGrid& I, FlowVariant variant);

/// Tensor-product data u0(x) = prod_a f_a(x_a) on the torus: the Schrodinger
/// flow and every L^r norm factor over the axes, so the d-dimensional s = 0
/// quotient is computed from d one-dimensional flows.
struct SeparableData {
  std::vector<Field> factors; ///< one 1-D field per axis
};
/// Per-node prod_a ||e^{it Delta} f_a||_{L^{r_k}} for each r_k (outer index k).
std::vector<std::vector<double>> separable_flow_norms(const SeparableData& data,
                                                      const std::vector<LebesgueExponent>& rs, const TimeGrid& I);
double separable_l2_norm(const SeparableData& data);

/// Duhamel term of the plate equation at every node of F's time grid.
Trajectory duhamel_trajectory(const Trajectory& F);

struct Pair {
  LebesgueExponent q, r;
};

/// ||Duhamel F||_{L^q W^{s,r}} / ||F||_{L^{q~'} W^{s-2, r~'}}.
double strichartz_quotient_duhamel(const Trajectory& F, const Pair& pair, const Pair& dual_pair, double s);

/// Full solution over ||u0||_{H^s} + ||u1||_{H^{s-2}} + ||F||_{L^{q~'} W^{s-2, r~'}},
/// evaluated on I (F, when present, must live on I).
double solution_quotient(const Field& u0, const Field& u1, const std::optional<Trajectory>& F, const Pair& pair,
                         const Pair& dual_pair, double s, const TimeGrid& I);

struct SweepRow {
  FlowVariant variant = FlowVariant::Schrodinger;
  int d = 0, n = 0;
  double L = 0.0, s = 0.0;
  std::string q, r;
  double T = 0.0;
  double quotient = 0.0;
};
void write_sweep_csv_header(std::ostream& os);
void write_sweep_csv_row(std::ostream& os, const SweepRow& row);

} // namespace platelab
