#pragma once

// Dense linear-algebra and spectral primitives shared by the rest of the
// library. Everything here is deterministic: identical input produces
// bit-identical output on a given platform/compiler.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace reskernel {

// Raised when a caller breaks a documented precondition (shape mismatch,
// out-of-range parameter, asymmetric input to a symmetric routine, ...).
class contract_violation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an iterative routine fails to reach its tolerance.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw contract_violation(msg);
}

template <typename... Parts>
std::string concat(const Parts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace detail

using Vector = std::vector<double>;
using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      detail::require(row.size() == cols_, "Matrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator*=(double s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator*(double s, Matrix m) { return m *= s; }

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  detail::require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "subtract: shape mismatch");
  Matrix c = a;
  for (std::size_t k = 0; k < c.data().size(); ++k) c.data()[k] -= b.data()[k];
  return c;
}

inline Vector operator*(const Matrix& a, std::span<const double> x) {
  detail::require(a.cols() == x.size(), "matvec: dimension mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += ai[j] * x[j];
    y[i] = acc;
  }
  return y;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  detail::require(a.size() == b.size(), "dot: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs(const Matrix& a) { return max_abs(a.data()); }

inline double frobenius_norm(const Matrix& a) { return norm2(a.data()); }

inline bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

// Largest |A(i,j) - A(j,i)|.
inline double asymmetry(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - a(j, i)));
  return m;
}

struct EigenDecomposition {
  Vector values;   // descending
  Matrix vectors;  // column k pairs with values[k]
};

struct JacobiOptions {
  double relative_tolerance = 1e-12;  // off(A)_F <= tol * ||A||_F
  int max_sweeps = 100;
  double symmetry_tolerance = 1e-12;
};

namespace detail {

// Flip v so that its largest-magnitude entry is positive. Near-ties (within
// a relative 1e-12) resolve to the lowest index so round-off cannot decide.
inline void orient(std::span<double> v) {
  const double m = max_abs(v);
  if (m == 0.0) return;
  for (double x : v) {
    if (std::abs(x) >= m * (1.0 - 1e-12)) {
      if (x < 0.0)
        for (auto& y : v) y = -y;
      return;
    }
  }
}

}  // namespace detail

// Full eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
// Eigenvalues come back in descending order (ties keep their original
// diagonal position), each eigenvector oriented by detail::orient.
inline EigenDecomposition sym_eig(const Matrix& input, const JacobiOptions& opt = {}) {
  detail::require(input.is_square(), "sym_eig: matrix is not square");
  detail::require(all_finite(input.data()), "sym_eig: non-finite entry");
  const double asym = asymmetry(input);
  detail::require(asym <= opt.symmetry_tolerance,
                  detail::concat("sym_eig: matrix is not symmetric (max asymmetry ", asym, ")"));

  const std::size_t n = input.rows();
  Matrix a = input;
  // Rows of vt are eigenvectors; kept transposed so rotations touch
  // contiguous memory.
  Matrix vt = Matrix::identity(n);

  const double scale = frobenius_norm(a);
  const double target = opt.relative_tolerance * scale;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  double off = off_norm();
  int sweep = 0;
  while (off > target) {
    if (sweep == opt.max_sweeps)
      throw convergence_error(
          detail::concat("sym_eig: no convergence after ", opt.max_sweeps,
                         " sweeps (off-diagonal norm ", off, ")"),
          off);
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Negligible against both diagonal entries: drop it outright.
        if (std::abs(apq) * 1e18 < std::min(std::abs(app), std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        auto rp = a.row(p);
        auto rq = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double g = rp[k];
          const double h = rq[k];
          const double gp = g - s * (h + g * tau);
          const double hq = h + s * (g - h * tau);
          rp[k] = gp;
          rq[k] = hq;
          a(k, p) = gp;
          a(k, q) = hq;
        }
        auto vp = vt.row(p);
        auto vq = vt.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double g = vp[k];
          const double h = vq[k];
          vp[k] = g - s * (h + g * tau);
          vq[k] = h + s * (g - h * tau);
        }
      }
    }
    off = off_norm();
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src);
    auto v = vt.row(src);
    detail::orient(v);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v[i];
  }
  return out;
}

// sigma_max(A) = sqrt(lambda_max(A^T A)).
inline double largest_singular_value(const Matrix& a) {
  detail::require(!a.empty(), "largest_singular_value: empty matrix");
  const Matrix gram = a.transpose() * a;
  // A^T A is symmetric up to summation order; symmetrize before solving.
  Matrix sym = gram;
  for (std::size_t i = 0; i < sym.rows(); ++i)
    for (std::size_t j = i + 1; j < sym.cols(); ++j)
      sym(i, j) = sym(j, i) = 0.5 * (gram(i, j) + gram(j, i));
  const auto eig = sym_eig(sym);
  return std::sqrt(std::max(eig.values.front(), 0.0));
}

namespace detail {

// exp(-2*pi*i*r/n) with exact values on the axes.
inline Complex unit_root(std::size_t r, std::size_t n) {
  if ((4 * r) % n == 0) {
    switch ((4 * r) / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, -1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, 1.0};
      default: break;
    }
  }
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace detail

// Unnormalized forward DFT: X_k = sum_j v_j exp(-2 pi i jk/n).
// Direct O(n^2) evaluation; n is a few hundred at most here.
inline ComplexVector dft(std::span<const double> v) {
  const std::size_t n = v.size();
  detail::require(n >= 1, "dft: empty input");
  detail::require(all_finite(v), "dft: non-finite input");
  ComplexVector roots(n);
  for (std::size_t r = 0; r < n; ++r) roots[r] = detail::unit_root(r, n);
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double re = 0.0, im = 0.0;
    std::size_t r = 0;  // (j*k) mod n
    for (std::size_t j = 0; j < n; ++j) {
      re += v[j] * roots[r].real();
      im += v[j] * roots[r].imag();
      r += k;
      if (r >= n) r -= n;
    }
    out[k] = {re, im};
  }
  return out;
}

// Number of eigenvalues above rel_tol * lambda_max. Expects a descending,
// numerically non-negative spectrum.
inline std::size_t numerical_rank(std::span<const double> eigenvalues, double rel_tol) {
  if (eigenvalues.empty()) return 0;
  detail::require(std::is_sorted(eigenvalues.begin(), eigenvalues.end(), std::greater<>{}),
                  "numerical_rank: eigenvalues not sorted descending");
  const double top = std::max(eigenvalues.front(), 0.0);
  detail::require(eigenvalues.back() >= -1e-9 * top,
                  "numerical_rank: spectrum has a significantly negative eigenvalue");
  if (top == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                                [&](double x) { return x > rel_tol * top; }));
}

}  // namespace reskernel
