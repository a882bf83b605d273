#include "platelab/errors.hpp"
#include "platelab/potential_solver.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace platelab;

namespace {

const LebesgueExponent kTwo(Rational(2));

Field gauss(const Grid& g, double w) {
  return Field::sample(g, [w](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return cplx(std::exp(-r2 / (2 * w * w)));
  });
}

// u'' + Delta^2 u + c u = 0 solved mode by mode.
Field constant_potential_exact(const Field& u0, const Field& u1, double c, double t) {
  const Field a = forward_transform(u0), b = forward_transform(u1);
  const std::vector<double> k2 = xi_squared(u0.grid());
  Field out(u0.grid(), Rep::Spectral);
  for (std::size_t i = 0; i < k2.size(); ++i) {
    const double om = std::sqrt(k2[i] * k2[i] + c);
    out[i] = std::cos(om * t) * a[i] + std::sin(om * t) / om * b[i];
  }
  return inverse_transform(out);
}

double rel_err(const Field& a, const Field& b) {
  return lebesgue_norm(to_rep(a, Rep::Space) - to_rep(b, Rep::Space), kTwo) / lebesgue_norm(to_rep(b, Rep::Space), kTwo);
}

} // namespace

TEST_CASE("zero potential reproduces the free plate") {
  const Grid g(1, 32, 8.0);
  const Field u0 = gauss(g, 1.0), u1 = cplx(0.2) * gauss(g, 1.5);
  const TimeGrid I(1.0, 9);
  const SolveReport rep = picard_solve({u0, u1, std::nullopt, PotentialSpec::zero(g), I});
  for (int j = 0; j < I.m(); ++j)
    CHECK(rel_err(rep.trajectory.fields[j], free_plate_solution(u0, u1, I.node(j)).u) < 1e-12);
  CHECK(rel_err(rep.final_state.ut, free_plate_solution(u0, u1, 1.0).ut) < 1e-12);
}

TEST_CASE("constant potential converges at second order") {
  const Grid g(1, 32, 8.0);
  const Field u0 = gauss(g, 1.0), u1 = cplx(0.3) * gauss(g, 1.0);
  const double c = 0.5;
  const Field V = Field::constant(g, c);
  const Field exact = constant_potential_exact(u0, u1, c, 1.0);
  std::vector<double> errs;
  for (int m : {9, 17, 33}) {
    const SolveReport rep = picard_solve({u0, u1, std::nullopt, PotentialSpec::static_profile(V), TimeGrid(1.0, m)});
    errs.push_back(rel_err(rep.trajectory.fields.back(), exact));
  }
  CHECK(errs.back() < 1e-3);
  CHECK(std::log2(errs[1] / errs[2]) > 1.9);
  CHECK(std::log2(errs[0] / errs[1]) > 1.9);
}

TEST_CASE("piecewise potential switches at a node") {
  const Grid g(1, 32, 8.0);
  const Field u0 = gauss(g, 1.0), u1(g, Rep::Space);
  const PotentialSpec V = PotentialSpec::piecewise({0.0, 0.5, 1.0}, {Field::constant(g, 0.2), Field::constant(g, 0.8)});
  CHECK(V.at(0.5)[0] == cplx(0.2));
  CHECK(V.at(0.5, true)[0] == cplx(0.8));
  CHECK_THROWS_AS(V.at(1.5), DomainError);
  const SolveReport rep = picard_solve({u0, u1, std::nullopt, V, TimeGrid(1.0, 65)});
  // exact: evolve with c = 0.2 to 0.5, then with c = 0.8
  const Field a = constant_potential_exact(u0, u1, 0.2, 0.5);
  const double h = 1e-6;
  const Field v = cplx(1.0 / (2 * h)) * (constant_potential_exact(u0, u1, 0.2, 0.5 + h) -
                                         constant_potential_exact(u0, u1, 0.2, 0.5 - h));
  CHECK(rel_err(rep.trajectory.fields.back(), constant_potential_exact(a, v, 0.8, 0.5)) < 1e-3);
  CHECK_THROWS_AS(picard_solve({u0, u1, std::nullopt, V, TimeGrid(1.0, 4)}), DomainError);
}

TEST_CASE("time offset shifts the potential clock") {
  const Grid g(1, 32, 8.0);
  const Field u0 = gauss(g, 1.0), u1(g, Rep::Space);
  const PotentialSpec V = PotentialSpec::piecewise({10.0, 11.0}, {Field::constant(g, 0.4)});
  SolverOptions o;
  o.time_offset = 10.0;
  const SolveReport rep = picard_solve({u0, u1, std::nullopt, V, TimeGrid(1.0, 17)}, o);
  CHECK(rel_err(rep.trajectory.fields.back(), constant_potential_exact(u0, u1, 0.4, 1.0)) < 1e-3);
  CHECK_THROWS_AS(picard_solve({u0, u1, std::nullopt, V, TimeGrid(1.0, 17)}), DomainError);
}

TEST_CASE("non-contractive problems subdivide or fail") {
  const Grid g(1, 16, 4.0);
  const Field u0 = gauss(g, 1.0), u1(g, Rep::Space);
  const Field V = Field::constant(g, 400.0);
  SolverOptions o;
  const SolveReport rep = picard_solve({u0, u1, std::nullopt, PotentialSpec::static_profile(V), TimeGrid(1.0, 65)}, o);
  CHECK(rep.subintervals.size() > 1);
  o.max_subdivision = 0;
  CHECK_THROWS_AS(picard_solve({u0, u1, std::nullopt, PotentialSpec::static_profile(V), TimeGrid(1.0, 65)}, o),
                  ConvergenceError);
  std::ostringstream os;
  write_solve_report(os, rep);
  CHECK(os.str().find("subintervals") == 0);
}

// on the boundary 2/alpha + d/beta = s + 2 both regimes give admissible pairs
TEST_CASE("regime exponents satisfy the scaling relation on the critical class") {
  const RegimePair a = classify_regime({Rational(2), Rational(3), Rational(0)}, 3);
  CHECK(Rational(2) * a.q0.reciprocal() + Rational(3) * a.r0.reciprocal() == Rational(3, 2));
  CHECK(a.alpha_at_least_two);
  const RegimePair b = classify_regime({Rational(3, 2), Rational(9, 2), Rational(0)}, 3);
  CHECK_FALSE(b.alpha_at_least_two);
  CHECK(Rational(2) * b.q0.reciprocal() + Rational(3) * b.r0.reciprocal() == Rational(3, 2));
  CHECK(a.admissible);
  CHECK(b.admissible);
  CHECK_THROWS_AS(classify_regime({Rational(2), Rational(3), Rational(2)}, 3), IndexError);
}

TEST_CASE("standing wave needs a large enough box") {
  const GroundState gs = newton_ground_state(1e-3, 40.0);
  CHECK_THROWS_AS(standing_wave(gs, 1.0, 0.0, Grid(1, 64, 5.0)), ResourceError);
  const Field u = standing_wave(gs, 1.0, 0.3, Grid(1, 256, 30.0), 1e-10);
  CHECK(std::abs(u[128]) == doctest::Approx(1.5));
  CHECK(std::arg(u[128]) == doctest::Approx(0.3));
}
