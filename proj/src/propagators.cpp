#include "platelab/propagators.hpp"
#include "platelab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>

namespace platelab {

Field schrodinger_flow(const Field& u0, double t) {
  return apply_radial_multiplier(u0, [t](double k2) { return std::polar(1.0, -t * k2); });
}

Field plate_cos(const Field& u0, double t) {
  return apply_radial_multiplier(u0, [t](double k2) { return cplx(std::cos(t * k2)); });
}

namespace {

double sinc_symbol(double k2, double t) {
  const double th = t * k2;
  if (std::fabs(th) < 1e-4) {
    const double th2 = th * th;
    return t * (1.0 - th2 / 6.0 + th2 * th2 / 120.0);
  }
  return std::sin(th) / k2;
}

} // namespace

Field plate_sinc(const Field& u1, double t) {
  return apply_radial_multiplier(u1, [t](double k2) { return cplx(sinc_symbol(k2, t)); });
}

PlateState free_plate_solution(const Field& u0, const Field& u1, double t) {
  if (!(u0.grid() == u1.grid())) throw DomainError("initial data live on different grids");
  Field a = to_rep(u0, Rep::Spectral);
  Field b = to_rep(u1, Rep::Spectral);
  const std::vector<double> k2 = xi_squared(u0.grid());
  Field u(u0.grid(), Rep::Spectral), ut(u0.grid(), Rep::Spectral);
  for (std::size_t i = 0; i < k2.size(); ++i) {
    const double c = std::cos(t * k2[i]);
    const double sn = std::sin(t * k2[i]);
    u[i] = c * a[i] + sinc_symbol(k2[i], t) * b[i];
    ut[i] = -k2[i] * sn * a[i] + c * b[i];
  }
  return {inverse_transform(u), inverse_transform(ut), t};
}

StepWeights step_weights(double omega, double h) {
  StepWeights w;
  const double th = omega * h;
  w.c = std::cos(th);
  w.ws = omega * std::sin(th);
  double f1, f2, f3, f4; // (th - sin)/th^3, (sin - th cos)/th^3, (1 - cos)/th^2, (cos + th sin - 1)/th^2
  if (std::fabs(th) < 0.1) {
    const double x = th * th;
    f1 = 1.0 / 6 - x / 120 + x * x / 5040 - x * x * x / 362880 + x * x * x * x / 39916800;
    f2 = 1.0 / 3 - x / 30 + x * x / 840 - x * x * x / 45360 + x * x * x * x / 3991680;
    f3 = 0.5 - x / 24 + x * x / 720 - x * x * x / 40320 + x * x * x * x / 3628800;
    f4 = 0.5 - x / 8 + x * x / 144 - x * x * x / 5760 + x * x * x * x / 403200;
    w.sw = h * (1.0 - x / 6 + x * x / 120 - x * x * x / 5040);
  } else {
    const double s = std::sin(th), c = w.c;
    const double th2 = th * th, th3 = th2 * th;
    f1 = (th - s) / th3;
    f2 = (s - th * c) / th3;
    f3 = (1.0 - c) / th2;
    f4 = (c + th * s - 1.0) / th2;
    w.sw = s / omega;
  }
  w.a1 = h * h * f1;
  w.a0 = h * h * f2;
  w.b1 = h * f3;
  w.b0 = h * f4;
  return w;
}

PlateStepper::PlateStepper(const Grid& grid, double h) : h_(h) {
  const std::vector<double> k2 = xi_squared(grid);
  std::map<double, StepWeights> cache;
  w_.reserve(k2.size());
  for (double om : k2) {
    auto it = cache.find(om);
    if (it == cache.end()) it = cache.emplace(om, step_weights(om, h)).first;
    w_.push_back(it->second);
  }
}

void PlateStepper::step(std::vector<cplx>& U, std::vector<cplx>& P, const std::vector<cplx>* G0,
                        const std::vector<cplx>* G1) const {
  const std::size_t N = w_.size();
  for (std::size_t i = 0; i < N; ++i) {
    const StepWeights& w = w_[i];
    cplx u = w.c * U[i] + w.sw * P[i];
    cplx p = -w.ws * U[i] + w.c * P[i];
    if (G0) {
      u += w.a0 * (*G0)[i];
      p += w.b0 * (*G0)[i];
    }
    if (G1) {
      u += w.a1 * (*G1)[i];
      p += w.b1 * (*G1)[i];
    }
    U[i] = u;
    P[i] = p;
  }
}

Field duhamel(const Trajectory& F, double t) {
  const TimeGrid& tg = F.times;
  if (t < 0.0) throw DomainError("duhamel needs t >= 0");
  if (t > tg.T_end() * (1.0 + 1e-14)) throw DomainError("duhamel: t beyond the trajectory range");
  const Grid& g = F.grid();
  std::vector<cplx> U(g.size()), P(g.size());
  const double h = tg.step();
  const int full = std::min(tg.m() - 1, static_cast<int>(std::floor(t / h * (1.0 + 1e-14))));
  PlateStepper stepper(g, h);
  std::vector<cplx> G0 = forward_transform(to_rep(F.fields[0], Rep::Space)).values();
  for (int j = 1; j <= full; ++j) {
    std::vector<cplx> G1 = to_rep(F.fields[j], Rep::Spectral).values();
    stepper.step(U, P, &G0, &G1);
    G0 = std::move(G1);
  }
  const double rest = t - full * h;
  if (full < tg.m() - 1 && rest > 1e-14 * h) {
    std::vector<cplx> G1 = to_rep(F.fields[full + 1], Rep::Spectral).values();
    const double frac = rest / h;
    for (std::size_t i = 0; i < G1.size(); ++i) G1[i] = G0[i] + frac * (G1[i] - G0[i]);
    PlateStepper partial(g, rest);
    partial.step(U, P, &G0, &G1);
  }
  return inverse_transform(Field(g, Rep::Spectral, std::move(U)));
}

void export_trajectory(const Trajectory& traj, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  std::ofstream index(fs::path(directory) / "index.txt");
  if (!index) throw ResourceError("cannot write trajectory index in '" + directory + "'");
  index << std::setprecision(17);
  for (std::size_t i = 0; i < traj.fields.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "field_%05zu.txt", i);
    save_field((fs::path(directory) / name).string(), to_rep(traj.fields[i], Rep::Space));
    index << i << ' ' << traj.times.node(static_cast<int>(i)) << ' ' << name << '\n';
  }
}

} // namespace platelab
