#ifndef RELAXLIM_SPECTRAL_HPP_
#define RELAXLIM_SPECTRAL_HPP_

#include <Eigen/Core>

#include <array>
#include <complex>
#include <memory>
#include <vector>

namespace relaxlim {

/// Periodic box [0, L_x) x [0, L_y) x [0, L_z) sampled on a uniform grid.
///
/// Points are stored row-major (x slowest). Wavenumber tables are laid out
/// per flat point index so spectral multipliers are plain Eigen array
/// products.
class SpectralGrid {
 public:
  static std::shared_ptr<const SpectralGrid> make(int dim, std::vector<int> n,
                                                  std::vector<double> length = {});

  int dim() const { return dim_; }
  int n(int axis) const { return n_[axis]; }
  double length(int axis) const { return length_[axis]; }
  Eigen::Index size() const { return size_; }
  double volume() const;
  double cell_volume() const { return volume() / static_cast<double>(size_); }

  /// Integer mode number along `axis` at flat index `i` (in [-n/2, n/2)).
  int mode(Eigen::Index i, int axis) const;

  /// First-derivative wavenumber along `axis`; the Nyquist entry is zero.
  const Eigen::ArrayXd& k_odd(int axis) const { return k_odd_[axis]; }
  /// |k|^2 including the Nyquist mode (second-derivative symbol).
  const Eigen::ArrayXd& k_squared() const { return k_squared_; }
  /// |k|^2 built from the odd-derivative wavenumbers (iterated gradients).
  const Eigen::ArrayXd& k_squared_odd() const { return k_squared_odd_; }
  /// Euclidean |k| used by the mollifier cutoff.
  const Eigen::ArrayXd& k_magnitude() const { return k_magnitude_; }
  /// 1 for modes kept by the 2/3 rule, 0 otherwise.
  const Eigen::ArrayXd& dealias_mask() const { return dealias_mask_; }
  /// Largest Euclidean wavenumber on the grid.
  double max_wavenumber() const { return k_magnitude_.maxCoeff(); }

  /// Physical coordinate of flat point `i` along `axis`.
  double coordinate(Eigen::Index i, int axis) const;

  bool same_shape(const SpectralGrid& other) const;

 private:
  SpectralGrid() = default;

  int dim_ = 1;
  std::array<int, 3> n_{1, 1, 1};
  std::array<double, 3> length_{1.0, 1.0, 1.0};
  Eigen::Index size_ = 1;
  std::array<Eigen::ArrayXd, 3> k_odd_;
  Eigen::ArrayXd k_squared_;
  Eigen::ArrayXd k_squared_odd_;
  Eigen::ArrayXd k_magnitude_;
  Eigen::ArrayXd dealias_mask_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Real samples of a scalar (1 component) or vector (n components) field.
/// Rows are grid points, columns are components.
class Field {
 public:
  Field() = default;
  Field(GridPtr grid, int components);
  Field(GridPtr grid, Eigen::ArrayXXd values);

  const GridPtr& grid_ptr() const { return grid_; }
  const SpectralGrid& grid() const { return *grid_; }
  int components() const { return static_cast<int>(values_.cols()); }
  Eigen::Index points() const { return values_.rows(); }

  const Eigen::ArrayXXd& values() const { return values_; }
  Eigen::ArrayXXd& values() { return values_; }
  auto component(int c) const { return values_.col(c); }
  auto component(int c) { return values_.col(c); }

  bool all_finite() const { return values_.allFinite(); }

  /// Samples a callable f(x, y, z) -> value (components == 1) on the grid.
  template <typename F>
  static Field sample(GridPtr grid, F&& f);

  /// Samples a callable f(x, y, z) -> Eigen::Vector3d on the grid.
  template <typename F>
  static Field sample_vector(GridPtr grid, F&& f);

 private:
  GridPtr grid_;
  Eigen::ArrayXXd values_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
Field operator*(const Field& a, double s);
Field operator-(const Field& a);

/// Pointwise inner product over components; a scalar field.
Field dot(const Field& a, const Field& b);
/// Pointwise s(x) * v(x) for scalar s.
Field scale(const Field& s, const Field& v);
/// Pointwise |v(x)|^2.
Field squared_norm(const Field& v);

/// Complex spectrum of every component (rows: modes, cols: components).
using Spectrum = Eigen::ArrayXXcd;

Spectrum forward(const Field& f);
Field inverse(const GridPtr& grid, const Spectrum& s);

/// Spectral gradient. Component c, axis j lands at column c * dim + j.
Field gradient(const Field& f);
/// Spectral derivative along one axis.
Field derivative(const Field& f, int axis);
Field laplacian(const Field& f);
/// Pointwise sum over components and axes of grad(a) : grad(b).
Field gradient_dot(const Field& grad_a, const Field& grad_b);

/// Sharp Fourier cutoff keeping |k| <= 1/eta. Fields already inside the
/// cutoff band (discarded content at rounding level) are returned unchanged.
Field mollify(const Field& f, double eta);

/// 2/3-rule truncation: zeroes modes with |m_j| > n_j / 3 on any axis.
Field dealias(const Field& f);

/// L^2 norm by grid quadrature (cell volume x sum of squares).
double l2_norm(const Field& f);
/// L^2 norm from the Fourier side (Parseval).
double l2_norm_spectral(const Field& f);
/// L^2 norm of the order-`order` iterated gradient tensor.
double gradient_order_norm(const Field& f, int order);

inline constexpr int kMaxSobolevOrder = 7;

/// Sum over orders of the L^2 norms of iterated gradients, gamma <= k
/// (gamma >= 1 when homogeneous). Throws std::out_of_range for k > 7.
double sobolev_norm(const Field& f, int k, bool homogeneous = false);

double max_abs(const Field& f);

// -- implementation of the sampling templates --

template <typename F>
Field Field::sample(GridPtr grid, F&& f) {
  Field out(grid, 1);
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    out.values_(i, 0) = f(grid->coordinate(i, 0), grid->coordinate(i, 1),
                          grid->coordinate(i, 2));
  }
  return out;
}

template <typename F>
Field Field::sample_vector(GridPtr grid, F&& f) {
  Field out(grid, 3);
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    const Eigen::Vector3d v = f(grid->coordinate(i, 0), grid->coordinate(i, 1),
                                grid->coordinate(i, 2));
    out.values_.row(i) = v.transpose().array();
  }
  return out;
}

}  // namespace relaxlim

#endif  // RELAXLIM_SPECTRAL_HPP_
