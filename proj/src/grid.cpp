#include "platelab/grid.hpp"
#include "platelab/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <tuple>

namespace platelab {

Grid::Grid(int d, int n, double L) : d_(d), n_(n), L_(L), size_(1) {
  if (d < 1) throw DomainError("grid dimension must be >= 1, got " + std::to_string(d));
  if (n < 8 || n % 2 != 0) throw DomainError("grid points per axis must be even and >= 8, got " + std::to_string(n));
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("grid half-width must be positive");
  for (int i = 0; i < d; ++i) {
    if (size_ > (std::size_t{1} << 40) / static_cast<std::size_t>(n))
      throw ResourceError("grid too large");
    size_ *= static_cast<std::size_t>(n);
  }
}

Grid make_grid(int d, int n, double L) { return Grid(d, n, L); }

double Grid::cell_volume() const noexcept { return std::pow(h(), d_); }

std::vector<double> Grid::freqs() const {
  std::vector<double> out(n_);
  for (int m = -n_ / 2; m < n_ / 2; ++m) out[m + n_ / 2] = m * (M_PI / L_);
  return out;
}

void Grid::unravel(std::size_t flat, std::span<int> idx) const noexcept {
  for (int a = d_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
}

const char* to_string(Rep rep) { return rep == Rep::Space ? "space" : "spectral"; }

Field::Field(const Grid& grid, Rep rep) : grid_(grid), rep_(rep), data_(grid.size()) {}

Field::Field(const Grid& grid, Rep rep, std::vector<cplx> data) : grid_(grid), rep_(rep), data_(std::move(data)) {
  if (data_.size() != grid_.size())
    throw DomainError("field data length " + std::to_string(data_.size()) + " does not match grid size " +
                      std::to_string(grid_.size()));
}

Field Field::sample(const Grid& grid, const std::function<cplx(std::span<const double>)>& f) {
  Field out(grid, Rep::Space);
  std::vector<int> idx(grid.d());
  std::vector<double> x(grid.d());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.unravel(i, idx);
    for (int a = 0; a < grid.d(); ++a) x[a] = grid.coordinate(idx[a]);
    out.data_[i] = f(x);
  }
  return out;
}

Field Field::constant(const Grid& grid, cplx c) {
  return Field(grid, Rep::Space, std::vector<cplx>(grid.size(), c));
}

namespace {

void check_compatible(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw DomainError("fields live on different grids");
  if (a.rep() != b.rep()) throw RepresentationError("fields have different representations");
}

} // namespace

Field& Field::operator+=(const Field& o) {
  check_compatible(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  check_compatible(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Field& Field::operator*=(cplx c) {
  for (auto& v : data_) v *= c;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx c, Field a) { return a *= c; }

Field pointwise_product(const Field& a, const Field& b) {
  check_compatible(a, b);
  if (a.rep() != Rep::Space) throw RepresentationError("pointwise product needs space representation");
  Field out(a.grid(), Rep::Space);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

namespace {

// FFTW planning is not thread safe; execution of a finished plan is.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int d, int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(d, n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
    std::vector<cplx> buf(total);
    std::vector<int> dims(d, n);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft(d, dims.data(), p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw ResourceError("FFTW could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void run_transform(std::vector<cplx>& data, const Grid& g, int sign) {
  fftw_plan plan = PlanCache::instance().get(g.d(), g.n(), sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
  for (auto& v : data) v *= scale;
}

} // namespace

Field forward_transform(const Field& f) {
  if (f.rep() != Rep::Space) throw RepresentationError("forward transform expects a space-representation field");
  std::vector<cplx> data = f.values();
  run_transform(data, f.grid(), FFTW_FORWARD);
  return Field(f.grid(), Rep::Spectral, std::move(data));
}

Field inverse_transform(const Field& f) {
  if (f.rep() != Rep::Spectral)
    throw RepresentationError("inverse transform expects a spectral-representation field");
  std::vector<cplx> data = f.values();
  run_transform(data, f.grid(), FFTW_BACKWARD);
  return Field(f.grid(), Rep::Space, std::move(data));
}

Field to_rep(const Field& f, Rep rep) {
  if (f.rep() == rep) return f;
  return rep == Rep::Spectral ? forward_transform(f) : inverse_transform(f);
}

std::vector<double> xi_squared(const Grid& grid) {
  const int n = grid.n(), d = grid.d();
  std::vector<double> k2(n);
  for (int k = 0; k < n; ++k) k2[k] = grid.wavenumber(k) * grid.wavenumber(k);
  std::vector<double> out(grid.size());
  std::vector<int> idx(d);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.unravel(i, idx);
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += k2[idx[a]];
    out[i] = s;
  }
  return out;
}

namespace {

std::string describe_xi(std::span<const double> xi) {
  std::ostringstream os;
  os << std::setprecision(17) << "(";
  for (std::size_t a = 0; a < xi.size(); ++a) os << (a ? ", " : "") << xi[a];
  os << ")";
  return os.str();
}

} // namespace

Field apply_multiplier(const Field& f, const Symbol& sigma, MultiplierOptions opts) {
  Field spec = to_rep(f, Rep::Spectral);
  const Grid& g = f.grid();
  std::vector<int> idx(g.d());
  std::vector<double> xi(g.d());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unravel(i, idx);
    bool unpaired = false;
    for (int a = 0; a < g.d(); ++a) {
      xi[a] = g.wavenumber(idx[a]);
      unpaired = unpaired || idx[a] == g.n() / 2;
    }
    cplx s = sigma(xi);
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw DomainError("symbol is not finite at xi = " + describe_xi(xi));
    spec[i] = (opts.zero_unpaired && unpaired) ? cplx(0.0) : spec[i] * s;
  }
  return to_rep(spec, f.rep());
}

Field apply_radial_multiplier(const Field& f, const RadialSymbol& sigma) {
  Field spec = to_rep(f, Rep::Spectral);
  const std::vector<double> k2 = xi_squared(f.grid());
  for (std::size_t i = 0; i < k2.size(); ++i) {
    cplx s = sigma(k2[i]);
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
      std::vector<double> xi(f.grid().d());
      std::vector<int> idx(f.grid().d());
      f.grid().unravel(i, idx);
      for (int a = 0; a < f.grid().d(); ++a) xi[a] = f.grid().wavenumber(idx[a]);
      throw DomainError("symbol is not finite at xi = " + describe_xi(xi));
    }
    spec[i] *= s;
  }
  return to_rep(spec, f.rep());
}

void write_field(std::ostream& os, const Field& f) {
  const Grid& g = f.grid();
  os << std::setprecision(17);
  os << g.d() << ' ' << g.n() << ' ' << g.L() << ' ' << to_string(f.rep()) << '\n';
  for (const cplx& v : f.data()) os << v.real() << ' ' << v.imag() << '\n';
}

Field read_field(std::istream& is) {
  int d = 0, n = 0;
  double L = 0.0;
  std::string rep;
  if (!(is >> d >> n >> L >> rep)) throw DomainError("malformed field header");
  Rep r;
  if (rep == "space") r = Rep::Space;
  else if (rep == "spectral") r = Rep::Spectral;
  else throw DomainError("unknown field representation '" + rep + "'");
  Grid g(d, n, L);
  std::vector<cplx> data(g.size());
  for (auto& v : data) {
    double re = 0.0, im = 0.0;
    if (!(is >> re >> im)) throw DomainError("field file truncated");
    v = cplx(re, im);
  }
  return Field(g, r, std::move(data));
}

void save_field(const std::string& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw ResourceError("cannot open '" + path + "' for writing");
  write_field(os, f);
}

Field load_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ResourceError("cannot open '" + path + "'");
  return read_field(is);
}

} // namespace platelab
