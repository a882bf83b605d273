#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace platelab {

using cplx = std::complex<double>;

/// Periodic box [-L, L)^d with n points per axis. Row-major sample layout:
/// the last axis varies fastest.
class Grid {
public:
  Grid(int d, int n, double L);

  int d() const noexcept { return d_; }
  int n() const noexcept { return n_; }
  double L() const noexcept { return L_; }
  double h() const noexcept { return 2.0 * L_ / n_; }
  double cell_volume() const noexcept;
  std::size_t size() const noexcept { return size_; }

  /// x_j = -L + j h for j in [0, n).
  double coordinate(int j) const noexcept { return -L_ + j * h(); }
  /// Frequency attached to FFT index k (k < n/2 -> k, else k - n), times pi/L.
  double wavenumber(int k) const noexcept { return (k < n_ / 2 ? k : k - n_) * (M_PI / L_); }
  /// Ascending per-axis frequency list (pi/L) m, m = -n/2 .. n/2-1.
  std::vector<double> freqs() const;
  double nyquist() const noexcept { return M_PI * n_ / (2.0 * L_); }

  /// Unravels a flat index into per-axis indices.
  void unravel(std::size_t flat, std::span<int> idx) const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.d_ == b.d_ && a.n_ == b.n_ && a.L_ == b.L_;
  }

private:
  int d_;
  int n_;
  double L_;
  std::size_t size_;
};

/// Validated constructor (same checks as the Grid constructor).
Grid make_grid(int d, int n, double L);

enum class Rep { Space, Spectral };
const char* to_string(Rep rep);

/// Complex samples on a grid, either at the points x or at the frequencies
/// in FFT order. Spectral coefficients use the unitary DFT normalisation.
class Field {
public:
  Field(const Grid& grid, Rep rep);
  Field(const Grid& grid, Rep rep, std::vector<cplx> data);

  const Grid& grid() const noexcept { return grid_; }
  Rep rep() const noexcept { return rep_; }
  std::span<const cplx> data() const noexcept { return data_; }
  std::vector<cplx>& values() noexcept { return data_; }
  const std::vector<cplx>& values() const noexcept { return data_; }
  cplx operator[](std::size_t i) const noexcept { return data_[i]; }
  cplx& operator[](std::size_t i) noexcept { return data_[i]; }
  std::size_t size() const noexcept { return data_.size(); }

  /// Samples f at every grid point.
  static Field sample(const Grid& grid, const std::function<cplx(std::span<const double>)>& f);
  static Field constant(const Grid& grid, cplx c);

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx c);

private:
  Grid grid_;
  Rep rep_;
  std::vector<cplx> data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx c, Field a);
/// Pointwise product of two space-representation fields.
Field pointwise_product(const Field& a, const Field& b);

Field forward_transform(const Field& f);
Field inverse_transform(const Field& f);
/// Returns f in the requested representation (copy if already there).
Field to_rep(const Field& f, Rep rep);

/// |xi|^2 for every spectral index, in FFT order.
std::vector<double> xi_squared(const Grid& grid);

using Symbol = std::function<cplx(std::span<const double> xi)>;
using RadialSymbol = std::function<cplx(double xi2)>;

struct MultiplierOptions {
  /// Zero every mode on the unpaired -n/2 frequency of some axis (needed for
  /// odd symbols to keep real data real).
  bool zero_unpaired = false;
};

/// Multiplies the spectral coefficients by sigma(xi). The result is returned
/// in the representation of the input.
Field apply_multiplier(const Field& f, const Symbol& sigma, MultiplierOptions opts = {});
/// Same for symbols depending on |xi|^2 only.
Field apply_radial_multiplier(const Field& f, const RadialSymbol& sigma);

/// Text serialisation: header "d n L rep", then one "re im" pair per line.
void write_field(std::ostream& os, const Field& f);
Field read_field(std::istream& is);
void save_field(const std::string& path, const Field& f);
Field load_field(const std::string& path);

} // namespace platelab
