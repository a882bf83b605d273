#include "platelab/errors.hpp"
#include "platelab/propagators.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace platelab;

namespace {

const LebesgueExponent kTwo(Rational(2));

Field bump(const Grid& g) {
  return Field::sample(g, [](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return std::exp(-r2) * std::polar(1.0, x[0]);
  });
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace

TEST_CASE("schrodinger flow conserves L2 and obeys the group law") {
  const Grid g(2, 32, 6.0);
  const Field u0 = bump(g);
  const double n0 = lebesgue_norm(u0, kTwo);
  for (double t : {-100.0, -3.0, 0.7, 100.0})
    CHECK(std::fabs(lebesgue_norm(schrodinger_flow(u0, t), kTwo) / n0 - 1.0) < 1e-12);
  const Field a = schrodinger_flow(schrodinger_flow(u0, 0.3), 0.9);
  CHECK(max_diff(a, schrodinger_flow(u0, 1.2)) < 1e-12);
}

TEST_CASE("cosine and sinc symbols have the right parity") {
  const Grid g(1, 64, 8.0);
  const Field u = bump(g);
  CHECK(max_diff(plate_cos(u, 0.4), plate_cos(u, -0.4)) < 1e-13);
  const Field s1 = plate_sinc(u, 0.4), s2 = plate_sinc(u, -0.4);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(s1[i] + s2[i]) < 1e-13);
  // zero mode of sinc is t
  const Field c = plate_sinc(Field::constant(g, 1.0), 0.25);
  CHECK(std::abs(c[5] - 0.25) < 1e-14);
}

TEST_CASE("free plate solution has the right data and is conservative") {
  const Grid g(1, 64, 8.0);
  const Field u0 = bump(g);
  const Field u1 = cplx(0.5) * bump(g);
  const PlateState s0 = free_plate_solution(u0, u1, 0.0);
  CHECK(max_diff(s0.u, u0) < 1e-13);
  CHECK(max_diff(s0.ut, u1) < 1e-13);
  // energy ||u_t||^2 + ||Delta u||^2 is conserved
  auto energy = [&](const PlateState& s) {
    const double a = lebesgue_norm(s.ut, kTwo), b = sobolev_seminorm(s.u, 2.0, kTwo);
    return a * a + b * b;
  };
  CHECK(energy(free_plate_solution(u0, u1, 3.7)) == doctest::Approx(energy(s0)).epsilon(1e-12));
}

TEST_CASE("second difference of the free plate converges at second order") {
  const Grid g(1, 64, 8.0);
  const Field u0 = bump(g), u1 = cplx(0.3) * bump(g);
  const double t = 0.5;
  const Field bil = apply_radial_multiplier(free_plate_solution(u0, u1, t).u, [](double k2) { return cplx(k2 * k2); });
  double prev = 0.0;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const Field up = free_plate_solution(u0, u1, t + dt).u, um = free_plate_solution(u0, u1, t - dt).u,
                uc = free_plate_solution(u0, u1, t).u;
    double res = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i)
      res = std::max(res, std::abs((up[i] - 2.0 * uc[i] + um[i]) / (dt * dt) + bil[i]));
    if (prev > 0.0) CHECK(std::log2(prev / res) == doctest::Approx(2.0).epsilon(0.05));
    prev = res;
  }
}

TEST_CASE("step weights agree across the series switch") {
  const double h = 0.1;
  const StepWeights a = step_weights(0.999999, h), b = step_weights(1.000001, h);
  CHECK(a.a0 == doctest::Approx(b.a0).epsilon(1e-5));
  CHECK(a.a1 == doctest::Approx(b.a1).epsilon(1e-5));
  CHECK(a.b0 == doctest::Approx(b.b0).epsilon(1e-5));
  CHECK(a.b1 == doctest::Approx(b.b1).epsilon(1e-5));
  // omega = 0: U+ = U + hP + h^2 (G0/3 + G1/6), P+ = P + h (G0 + G1)/2
  const StepWeights z = step_weights(0.0, h);
  CHECK(z.a0 == doctest::Approx(h * h / 3));
  CHECK(z.a1 == doctest::Approx(h * h / 6));
  CHECK(z.b0 == doctest::Approx(h / 2));
  CHECK(z.b1 == doctest::Approx(h / 2));
}

TEST_CASE("duhamel with constant forcing matches the closed form") {
  const Grid g(1, 32, 6.0);
  const Field F0 = bump(g);
  const TimeGrid I(1.0, 5);
  const Trajectory F(I, std::vector<Field>(5, F0));
  // int_0^t sin((t-s)w)/w ds = (1 - cos(tw))/w^2
  for (double t : {1.0, 0.6}) {
    const Field exact = apply_radial_multiplier(F0, [t](double k2) {
      return cplx(k2 == 0.0 ? 0.5 * t * t : (1.0 - std::cos(t * k2)) / (k2 * k2));
    });
    CHECK(max_diff(duhamel(F, t), exact) < 1e-12);
  }
  CHECK_THROWS_AS(duhamel(F, 1.5), DomainError);
}

TEST_CASE("trajectory export writes one file per node") {
  const Grid g(1, 8, 1.0);
  const TimeGrid I(1.0, 3);
  const Trajectory tr(I, std::vector<Field>(3, Field::constant(g, 1.0)));
  const auto dir = std::filesystem::temp_directory_path() / "platelab_export_test";
  std::filesystem::remove_all(dir);
  export_trajectory(tr, dir.string());
  CHECK(std::filesystem::exists(dir / "field_00002.txt"));
  const Field back = load_field((dir / "field_00001.txt").string());
  CHECK(back[3] == cplx(1.0));
  std::filesystem::remove_all(dir);
}
