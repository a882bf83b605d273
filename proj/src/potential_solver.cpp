#include "platelab/potential_solver.hpp"
#include "platelab/errors.hpp"
#include "platelab/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace platelab {

PotentialSpec PotentialSpec::zero(const Grid& grid) {
  PotentialSpec p(grid);
  p.kind_ = PotentialKind::StaticProfile;
  p.zero_ = true;
  p.fields_.push_back(Field(grid, Rep::Space));
  return p;
}

PotentialSpec PotentialSpec::static_profile(Field V, ClassIndices cls) {
  PotentialSpec p(V.grid());
  p.kind_ = PotentialKind::StaticProfile;
  p.cls_ = cls;
  p.fields_.push_back(to_rep(V, Rep::Space));
  return p;
}

PotentialSpec PotentialSpec::piecewise(std::vector<double> breakpoints, std::vector<Field> pieces, ClassIndices cls) {
  if (pieces.empty() || breakpoints.size() != pieces.size() + 1)
    throw DomainError("piecewise potential needs one more breakpoint than pieces");
  for (std::size_t k = 1; k < breakpoints.size(); ++k)
    if (!(breakpoints[k] > breakpoints[k - 1])) throw DomainError("potential breakpoints must be strictly increasing");
  PotentialSpec p(pieces.front().grid());
  p.kind_ = PotentialKind::PiecewiseRescaled;
  p.cls_ = cls;
  p.breakpoints_ = std::move(breakpoints);
  for (auto& f : pieces) {
    if (!(f.grid() == p.grid_)) throw DomainError("potential pieces live on different grids");
    p.fields_.push_back(to_rep(f, Rep::Space));
  }
  return p;
}

PotentialSpec PotentialSpec::callable(const Grid& grid, Evaluator eval, ClassIndices cls) {
  PotentialSpec p(grid);
  p.kind_ = PotentialKind::Callable;
  p.cls_ = cls;
  p.eval_ = std::move(eval);
  return p;
}

Field PotentialSpec::at(double t, bool right_limit) const {
  switch (kind_) {
  case PotentialKind::StaticProfile: return fields_.front();
  case PotentialKind::Callable: {
    Field f = to_rep(eval_(t), Rep::Space);
    if (!(f.grid() == grid_)) throw DomainError("potential evaluator returned a field on another grid");
    return f;
  }
  case PotentialKind::PiecewiseRescaled: {
    const auto& b = breakpoints_;
    if (t < b.front() || t > b.back()) throw DomainError("time " + std::to_string(t) + " outside the potential schedule");
    // piece k covers (b[k], b[k+1]]; right limits use [b[k], b[k+1])
    std::size_t k;
    if (right_limit) k = static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), t) - b.begin()) - 1;
    else k = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), t) - b.begin());
    if (!right_limit && k > 0) --k;
    k = std::min(k, fields_.size() - 1);
    return fields_[k];
  }
  }
  throw DomainError("unknown potential kind");
}

namespace {

using Spectrum = std::vector<cplx>;

double working_norm_spectra(const std::vector<const Spectrum*>& nodes, const Grid& g, const TimeGrid& times,
                            double s) {
  if (nodes.empty()) return 0.0;
  const std::vector<double> k2 = xi_squared(g);
  std::vector<double> wk(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) wk[i] = k2[i] == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(k2[i], s);
  const double dv = g.cell_volume();
  double sup = 0.0;
  for (const Spectrum* f : nodes) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k2.size(); ++i) sum += wk[i] * std::norm((*f)[i]);
    sup = std::max(sup, std::sqrt(sum * dv));
  }
  if (g.d() < 3 || nodes.size() < 2) return sup;
  const LebesgueExponent r(Rational(2 * g.d(), g.d() - 2));
  const std::vector<double> w = times.weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    Spectrum x(k2.size());
    for (std::size_t i = 0; i < k2.size(); ++i) x[i] = std::sqrt(wk[i]) * (*nodes[j])[i];
    const double n = lebesgue_norm(inverse_transform(Field(g, Rep::Spectral, std::move(x))), r);
    acc += w[j] * n * n;
  }
  return std::max(sup, std::sqrt(acc));
}

} // namespace

double working_norm(const std::vector<Field>& nodes, const TimeGrid& times, double s) {
  if (nodes.empty()) return 0.0;
  std::vector<Field> spec;
  std::vector<const Spectrum*> ptr;
  spec.reserve(nodes.size());
  for (const Field& f : nodes) spec.push_back(to_rep(f, Rep::Spectral));
  for (const Field& f : spec) ptr.push_back(&f.values());
  return working_norm_spectra(ptr, nodes.front().grid(), times, s);
}

namespace {

struct Solver {
  const PlateProblem& prob;
  const SolverOptions& opts;
  const Grid grid;
  const double h;
  const double s;
  PlateStepper stepper;
  std::vector<Spectrum> forcing; // spectral forcing per node (empty when F = 0)
  std::vector<Field> u_out;
  std::vector<SubintervalReport> reports;

  Solver(const PlateProblem& p, const SolverOptions& o)
      : prob(p), opts(o), grid(p.u0.grid()), h(p.times.step()), s(p.potential.indices().s.to_double()),
        stepper(grid, h) {
    if (p.forcing) {
      if (p.forcing->times.m() != p.times.m() || std::fabs(p.forcing->times.T_end() - p.times.T_end()) > 1e-12)
        throw DomainError("forcing trajectory is not on the solver time grid");
      if (!(p.forcing->grid() == grid)) throw DomainError("forcing lives on another grid");
      forcing.reserve(p.times.m());
      for (const Field& f : p.forcing->fields) forcing.push_back(to_rep(f, Rep::Spectral).values());
    }
  }

  Spectrum potential_term(const Field& V, const Spectrum& v) const {
    Field x = inverse_transform(Field(grid, Rep::Spectral, v));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= V[i];
    return forward_transform(x).values();
  }

  // G_j = F_j - V_j v_j for every node of the segment
  std::vector<Spectrum> sources(int i0, const std::vector<Spectrum>& v, const std::vector<Field>& V) const {
    std::vector<Spectrum> G(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
      Spectrum g(grid.size());
      if (!forcing.empty()) g = forcing[i0 + j];
      if (!prob.potential.is_zero()) {
        Spectrum pv = potential_term(V[j], v[j]);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] -= pv[i];
      }
      G[j] = std::move(g);
    }
    return G;
  }

  // propagates (U, P) across the segment under sources G (null = none)
  // propagates (U, P) across the segment under sources G (null = none); P ends at the last node
  void propagate(Spectrum U, Spectrum& P, const std::vector<Spectrum>* G, std::vector<Spectrum>& u) const {
    const std::size_t count = u.size();
    u[0] = U;
    for (std::size_t j = 1; j < count; ++j) {
      if (G) stepper.step(U, P, &(*G)[j - 1], &(*G)[j]);
      else stepper.step(U, P, nullptr, nullptr);
      u[j] = U;
    }
  }

  double znorm(const std::vector<Spectrum>& v) const {
    std::vector<const Spectrum*> ptr;
    for (const auto& x : v) ptr.push_back(&x);
    return working_norm_spectra(ptr, grid, TimeGrid(h * (v.size() - 1), static_cast<int>(v.size())), s);
  }

  // difference a - b written into b
  double zdiff_inplace(const std::vector<Spectrum>& a, std::vector<Spectrum>& b) const {
    for (std::size_t j = 0; j < a.size(); ++j)
      for (std::size_t i = 0; i < a[j].size(); ++i) b[j][i] = a[j][i] - b[j][i];
    return znorm(b);
  }

  // one segment; returns false when the contraction target is missed
  bool try_segment(int i0, int i1, int depth, const Spectrum& U0, const Spectrum& P0, std::vector<Spectrum>& u,
                   Spectrum& P_end, SubintervalReport& rep) const {
    const std::size_t count = static_cast<std::size_t>(i1 - i0 + 1);
    std::vector<Field> V;
    if (!prob.potential.is_zero()) {
      V.reserve(count);
      for (std::size_t j = 0; j < count; ++j)
        V.push_back(prob.potential.at(prob.times.node(i0 + static_cast<int>(j)) + opts.time_offset, j == 0));
    }
    u.assign(count, Spectrum());
    if (opts.initial_guess == InitialGuess::Free) {
      Spectrum P = P0;
      propagate(U0, P, nullptr, u);
    } else {
      for (auto& x : u) x.assign(grid.size(), cplx(0.0));
    }
    rep = {prob.times.node(i0), prob.times.node(i1), depth, 0, 0.0, 0.0};
    double prev_diff = -1.0;
    std::vector<Spectrum> nu(count);
    for (int k = 0; k < opts.max_picard_iters; ++k) {
      std::vector<Spectrum> G = sources(i0, u, V);
      P_end = P0;
      propagate(U0, P_end, &G, nu);
      G.clear();
      const double norm = znorm(nu);
      const double diff = zdiff_inplace(nu, u);
      u.swap(nu);
      rep.iterations = k + 1;
      rep.final_residual = norm > 0.0 ? diff / norm : diff;
      if (prev_diff > 1e-12 * norm) {
        const double factor = diff / prev_diff;
        rep.contraction_factor = std::max(rep.contraction_factor, factor);
        if (factor >= opts.contraction_target) return false;
      }
      if (diff <= opts.tol * norm || diff == 0.0) return true;
      prev_diff = diff;
    }
    std::ostringstream os;
    os << "Picard iteration limit (" << opts.max_picard_iters << ") reached on [" << rep.t_start << ", " << rep.t_end
       << "] with relative change " << rep.final_residual << " and contraction factor " << rep.contraction_factor;
    throw ConvergenceError(os.str());
  }

  void solve_segment(int i0, int i1, int depth, Spectrum& U, Spectrum& P, std::vector<double>& failed) {
    std::vector<Spectrum> u;
    Spectrum P_end;
    SubintervalReport rep;
    if (try_segment(i0, i1, depth, U, P, u, P_end, rep)) {
      for (std::size_t j = 1; j < u.size(); ++j) u_out.push_back(inverse_transform(Field(grid, Rep::Spectral, u[j])));
      U = u.back();
      P = std::move(P_end);
      reports.push_back(rep);
      return;
    }
    failed.push_back(rep.contraction_factor);
    if (depth >= opts.max_subdivision || i1 - i0 < 2) {
      std::ostringstream os;
      os << "no contraction after " << depth << " subdivisions on [" << rep.t_start << ", " << rep.t_end
         << "]; measured factors:";
      for (double f : failed) os << ' ' << f;
      throw ConvergenceError(os.str());
    }
    const int mid = (i0 + i1) / 2;
    solve_segment(i0, mid, depth + 1, U, P, failed);
    solve_segment(mid, i1, depth + 1, U, P, failed);
  }
};

std::vector<int> breakpoint_nodes(const PlateProblem& prob, const SolverOptions& opts) {
  std::vector<int> cuts{0};
  const double h = prob.times.step();
  for (double b : prob.potential.breakpoints()) {
    const double x = (b - opts.time_offset) / h;
    if (x <= 1e-9 || x >= prob.times.m() - 1 - 1e-9) continue;
    const double r = std::round(x);
    if (std::fabs(x - r) > 1e-7) throw DomainError("potential breakpoint " + std::to_string(b) + " falls between time nodes");
    cuts.push_back(static_cast<int>(r));
  }
  cuts.push_back(prob.times.m() - 1);
  return cuts;
}

} // namespace

SolveReport picard_solve(const PlateProblem& prob, const SolverOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("solver tolerance must be positive");
  if (!(prob.u0.grid() == prob.u1.grid())) throw DomainError("initial data live on different grids");
  if (!prob.potential.is_zero() && !(prob.potential.grid() == prob.u0.grid()))
    throw DomainError("potential lives on another grid");
  Solver solver(prob, opts);
  Spectrum U = to_rep(prob.u0, Rep::Spectral).values();
  Spectrum P = to_rep(prob.u1, Rep::Spectral).values();
  solver.u_out.push_back(to_rep(prob.u0, Rep::Space));
  const std::vector<int> cuts = breakpoint_nodes(prob, opts);
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    std::vector<double> failed;
    solver.solve_segment(cuts[c], cuts[c + 1], 0, U, P, failed);
  }
  return {Trajectory(prob.times, std::move(solver.u_out)),
          PlateState{inverse_transform(Field(solver.grid, Rep::Spectral, U)), inverse_transform(Field(solver.grid, Rep::Spectral, P)),
                     prob.times.T_end()},
          std::move(solver.reports)};
}

void write_solve_report(std::ostream& os, const SolveReport& rep) {
  os << std::setprecision(10);
  os << "subintervals " << rep.subintervals.size() << '\n';
  os << "t_start t_end depth iterations contraction_factor final_residual\n";
  for (const auto& s : rep.subintervals)
    os << s.t_start << ' ' << s.t_end << ' ' << s.depth << ' ' << s.iterations << ' ' << s.contraction_factor << ' '
       << s.final_residual << '\n';
}

RegimePair classify_regime(const ClassIndices& cls, int d) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (cls.alpha < Rational(1)) throw IndexError("alpha must be >= 1");
  const Rational ia = cls.alpha.reciprocal(), ib = cls.beta.reciprocal();
  const bool big = cls.alpha >= Rational(2);
  const Rational iq = big ? Rational(1, 2) - ia : Rational(1) - ia;
  const Rational ir = -ib + Rational(1, 2) + (big ? cls.s + Rational(1) : cls.s) / Rational(d);
  if (iq < Rational(0) || iq > Rational(1) || ir < Rational(0) || ir > Rational(1))
    throw IndexError("regime exponents fall outside [1, inf]: 1/q0 = " + iq.str() + ", 1/r0 = " + ir.str());
  RegimePair out{LebesgueExponent::from_reciprocal(iq), LebesgueExponent::from_reciprocal(ir), big, {}};
  out.admissible = is_admissible(out.q0, out.r0, d);
  return out;
}

Field standing_wave(const GroundState& gs, double eps, double t, const Grid& grid, double tail_tol) {
  if (!(eps > 0.0)) throw DomainError("standing wave needs eps > 0");
  const double edge = std::fabs(gs.profile.value(eps * grid.L()));
  if (edge > tail_tol)
    throw ResourceError("box too small for the standing wave: v(eps L) = " + std::to_string(edge) + " exceeds " +
                        std::to_string(tail_tol));
  const cplx phase = std::polar(1.0, eps * eps * t);
  return Field::sample(grid, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return phase * gs.profile.value(eps * std::sqrt(r2));
  });
}

Field rescaled_potential(const RadialProfile& W, double eps, const Grid& grid) {
  if (!(eps > 0.0)) throw DomainError("rescaled potential needs eps > 0");
  const double e4 = eps * eps * eps * eps;
  return Field::sample(grid, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return cplx(e4 * W.value(eps * std::sqrt(r2)));
  });
}

} // namespace platelab
