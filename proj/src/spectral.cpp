#include "relaxlim/spectral.hpp"

#include "relaxlim/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace relaxlim {

namespace {

void check_same_grid(const Field& a, const Field& b) {
  if (a.grid_ptr() != b.grid_ptr() && !a.grid().same_shape(b.grid())) {
    throw MismatchError("fields live on different grids");
  }
  if (a.components() != b.components()) {
    throw MismatchError("component counts differ: " + std::to_string(a.components()) +
                        " vs " + std::to_string(b.components()));
  }
}

// One N-d transform of a single complex column, axis by axis.
void transform(Eigen::Ref<Eigen::ArrayXcd> data, const SpectralGrid& grid, bool inverse) {
  thread_local Eigen::FFT<double> fft;
  thread_local std::vector<std::complex<double>> line_in;
  thread_local std::vector<std::complex<double>> line_out;

  const Eigen::Index size = grid.size();
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const Eigen::Index len = grid.n(axis);
    Eigen::Index stride = 1;
    for (int a = axis + 1; a < 3; ++a) stride *= grid.n(a);
    const Eigen::Index block = len * stride;
    line_in.resize(len);
    for (Eigen::Index outer = 0; outer < size; outer += block) {
      for (Eigen::Index inner = 0; inner < stride; ++inner) {
        const Eigen::Index base = outer + inner;
        for (Eigen::Index j = 0; j < len; ++j) line_in[j] = data(base + j * stride);
        if (inverse) {
          fft.inv(line_out, line_in);
        } else {
          fft.fwd(line_out, line_in);
        }
        for (Eigen::Index j = 0; j < len; ++j) data(base + j * stride) = line_out[j];
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SpectralGrid

std::shared_ptr<const SpectralGrid> SpectralGrid::make(int dim, std::vector<int> n,
                                                       std::vector<double> length) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (n.size() == 1) n.assign(dim, n.front());
  if (static_cast<int>(n.size()) != dim) {
    throw std::invalid_argument("need one point count per axis");
  }
  if (length.empty()) length.assign(dim, 2.0 * std::numbers::pi);
  if (length.size() == 1) length.assign(dim, length.front());
  if (static_cast<int>(length.size()) != dim) {
    throw std::invalid_argument("need one length per axis");
  }

  std::shared_ptr<SpectralGrid> g(new SpectralGrid());
  g->dim_ = dim;
  g->size_ = 1;
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 8 || n[a] % 2 != 0) {
      throw std::invalid_argument("points per axis must be even and >= 8, got " +
                                  std::to_string(n[a]));
    }
    if (!(length[a] > 0.0) || !std::isfinite(length[a])) {
      throw std::invalid_argument("axis lengths must be positive");
    }
    g->n_[a] = n[a];
    g->length_[a] = length[a];
    g->size_ *= n[a];
  }

  const Eigen::Index size = g->size_;
  g->k_squared_ = Eigen::ArrayXd::Zero(size);
  g->k_squared_odd_ = Eigen::ArrayXd::Zero(size);
  g->dealias_mask_ = Eigen::ArrayXd::Ones(size);
  for (int a = 0; a < 3; ++a) g->k_odd_[a] = Eigen::ArrayXd::Zero(size);

  for (Eigen::Index i = 0; i < size; ++i) {
    for (int a = 0; a < dim; ++a) {
      const int m = g->mode(i, a);
      const double k = 2.0 * std::numbers::pi / g->length_[a] * m;
      const bool nyquist = (m == -g->n_[a] / 2);
      g->k_odd_[a](i) = nyquist ? 0.0 : k;
      g->k_squared_(i) += k * k;
      g->k_squared_odd_(i) += nyquist ? 0.0 : k * k;
      if (std::abs(m) > g->n_[a] / 3) g->dealias_mask_(i) = 0.0;
    }
  }
  g->k_magnitude_ = g->k_squared_.sqrt();
  return g;
}

double SpectralGrid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= length_[a];
  return v;
}

int SpectralGrid::mode(Eigen::Index i, int axis) const {
  Eigen::Index stride = 1;
  for (int a = axis + 1; a < 3; ++a) stride *= n_[a];
  const int j = static_cast<int>((i / stride) % n_[axis]);
  return j < n_[axis] / 2 ? j : j - n_[axis];
}

double SpectralGrid::coordinate(Eigen::Index i, int axis) const {
  if (axis >= dim_) return 0.0;
  Eigen::Index stride = 1;
  for (int a = axis + 1; a < 3; ++a) stride *= n_[a];
  const auto j = (i / stride) % n_[axis];
  return length_[axis] * static_cast<double>(j) / n_[axis];
}

bool SpectralGrid::same_shape(const SpectralGrid& other) const {
  if (dim_ != other.dim_) return false;
  for (int a = 0; a < dim_; ++a) {
    if (n_[a] != other.n_[a] || length_[a] != other.length_[a]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Field

Field::Field(GridPtr grid, int components)
    : grid_(std::move(grid)), values_(Eigen::ArrayXXd::Zero(grid_->size(), components)) {}

Field::Field(GridPtr grid, Eigen::ArrayXXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.rows() != grid_->size()) {
    throw MismatchError("value count does not match the grid");
  }
}

Field operator+(const Field& a, const Field& b) {
  check_same_grid(a, b);
  return Field(a.grid_ptr(), a.values() + b.values());
}

Field operator-(const Field& a, const Field& b) {
  check_same_grid(a, b);
  return Field(a.grid_ptr(), a.values() - b.values());
}

Field operator*(double s, const Field& a) { return Field(a.grid_ptr(), s * a.values()); }
Field operator*(const Field& a, double s) { return s * a; }
Field operator-(const Field& a) { return Field(a.grid_ptr(), -a.values()); }

Field dot(const Field& a, const Field& b) {
  check_same_grid(a, b);
  Eigen::ArrayXXd out = (a.values() * b.values()).rowwise().sum();
  return Field(a.grid_ptr(), std::move(out));
}

Field scale(const Field& s, const Field& v) {
  if (s.components() != 1) throw MismatchError("scale() expects a scalar field");
  Eigen::ArrayXXd out = v.values().colwise() * s.values().col(0);
  return Field(v.grid_ptr(), std::move(out));
}

Field squared_norm(const Field& v) { return dot(v, v); }

// ---------------------------------------------------------------------------
// Transforms and derivatives

Spectrum forward(const Field& f) {
  Spectrum s = f.values().cast<std::complex<double>>();
  for (int c = 0; c < f.components(); ++c) transform(s.col(c), f.grid(), false);
  return s;
}

Field inverse(const GridPtr& grid, const Spectrum& s) {
  Spectrum work = s;
  for (Eigen::Index c = 0; c < work.cols(); ++c) transform(work.col(c), *grid, true);
  return Field(grid, work.real());
}

Field derivative(const Field& f, int axis) {
  Spectrum s = forward(f);
  const std::complex<double> i_unit(0.0, 1.0);
  const Eigen::ArrayXcd symbol = i_unit * f.grid().k_odd(axis).cast<std::complex<double>>();
  s.colwise() *= symbol;
  return inverse(f.grid_ptr(), s);
}

Field gradient(const Field& f) {
  const int dim = f.grid().dim();
  const Spectrum s = forward(f);
  const std::complex<double> i_unit(0.0, 1.0);
  Spectrum g(s.rows(), s.cols() * dim);
  for (int c = 0; c < f.components(); ++c) {
    for (int a = 0; a < dim; ++a) {
      g.col(c * dim + a) = s.col(c) * (i_unit * f.grid().k_odd(a).cast<std::complex<double>>());
    }
  }
  return inverse(f.grid_ptr(), g);
}

Field laplacian(const Field& f) {
  Spectrum s = forward(f);
  s.colwise() *= (-f.grid().k_squared()).cast<std::complex<double>>();
  return inverse(f.grid_ptr(), s);
}

Field gradient_dot(const Field& grad_a, const Field& grad_b) { return dot(grad_a, grad_b); }

Field mollify(const Field& f, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("mollifier width must be positive");
  const double cutoff = 1.0 / eta;
  const Eigen::ArrayXd& kmag = f.grid().k_magnitude();
  if (kmag.maxCoeff() <= cutoff) return f;

  Spectrum s = forward(f);
  const Eigen::ArrayXd keep = (kmag <= cutoff).cast<double>();
  const double total = s.abs().maxCoeff();
  const double removed = (s.abs().colwise() * (1.0 - keep)).maxCoeff();
  if (removed <= 64.0 * std::numeric_limits<double>::epsilon() * total) return f;

  s.colwise() *= keep.cast<std::complex<double>>();
  return inverse(f.grid_ptr(), s);
}

Field dealias(const Field& f) {
  Spectrum s = forward(f);
  s.colwise() *= f.grid().dealias_mask().cast<std::complex<double>>();
  return inverse(f.grid_ptr(), s);
}

// ---------------------------------------------------------------------------
// Norms

double l2_norm(const Field& f) {
  return std::sqrt(f.grid().cell_volume() * f.values().square().sum());
}

double l2_norm_spectral(const Field& f) {
  const Spectrum s = forward(f);
  const double n = static_cast<double>(f.grid().size());
  return std::sqrt(f.grid().cell_volume() / n * s.abs2().sum());
}

namespace {

double order_norm_from_spectrum(const Spectrum& s, const SpectralGrid& grid, int order) {
  const double n = static_cast<double>(grid.size());
  const Eigen::ArrayXd weight = grid.k_squared_odd().pow(order);
  const double sum = (s.abs2().colwise() * weight).sum();
  return std::sqrt(grid.cell_volume() / n * sum);
}

}  // namespace

double gradient_order_norm(const Field& f, int order) {
  if (order < 0) throw std::out_of_range("derivative order must be nonnegative");
  if (order == 0) return l2_norm(f);
  return order_norm_from_spectrum(forward(f), f.grid(), order);
}

double sobolev_norm(const Field& f, int k, bool homogeneous) {
  if (k < 0 || k > kMaxSobolevOrder) {
    throw std::out_of_range("Sobolev order " + std::to_string(k) + " outside [0, " +
                            std::to_string(kMaxSobolevOrder) + "]");
  }
  double total = homogeneous ? 0.0 : l2_norm(f);
  if (k == 0) return total;
  const Spectrum s = forward(f);
  for (int order = 1; order <= k; ++order) {
    total += order_norm_from_spectrum(s, f.grid(), order);
  }
  return total;
}

double max_abs(const Field& f) { return f.values().abs().maxCoeff(); }

}  // namespace relaxlim
