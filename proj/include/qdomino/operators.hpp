#pragma once

#include "qdomino/error.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace qdomino {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
/// Diagonal of an operator that is a function of the I^z operators only.
using Diagonal = Eigen::ArrayXd;

/// Largest supported spin count; dense storage grows as 4^n.
inline constexpr int kMaxSpins = 12;

enum class SpinAxis { x, y, z };

inline char axis_name(SpinAxis a) {
  switch (a) {
  case SpinAxis::x: return 'x';
  case SpinAxis::y: return 'y';
  case SpinAxis::z: return 'z';
  }
  return '?';
}

inline void check_spin_count(int n) {
  if (n < 1 || n > kMaxSpins)
    throw InvalidArgument("spin count " + std::to_string(n) + " outside 1.." +
                          std::to_string(kMaxSpins));
}

inline Eigen::Index hilbert_dim(int n) { return Eigen::Index{1} << n; }

// Basis convention: spin 1 is the most significant bit of the basis index,
// bit value 0 is |up> (I^z = +1/2) and 1 is |down>.
inline std::uint64_t site_mask(int n, int k) {
  return std::uint64_t{1} << (n - k);
}

inline bool is_up(std::uint64_t basis_index, int n, int k) {
  return (basis_index & site_mask(n, k)) == 0;
}

/// Dense operator on the 2^n dimensional space of n spins-1/2.
class Operator {
public:
  Operator() = default;

  Operator(int n_spins, Matrix m) : n_(n_spins), m_(std::move(m)) {
    check_spin_count(n_);
    if (m_.rows() != hilbert_dim(n_) || m_.cols() != hilbert_dim(n_))
      throw InvalidArgument("operator matrix is " + std::to_string(m_.rows()) +
                            "x" + std::to_string(m_.cols()) + ", expected dim " +
                            std::to_string(hilbert_dim(n_)));
  }

  static Operator zero(int n) {
    check_spin_count(n);
    return {n, Matrix::Zero(hilbert_dim(n), hilbert_dim(n))};
  }

  static Operator identity(int n) {
    check_spin_count(n);
    return {n, Matrix::Identity(hilbert_dim(n), hilbert_dim(n))};
  }

  static Operator diagonal(int n, const Diagonal &d) {
    check_spin_count(n);
    if (d.size() != hilbert_dim(n))
      throw InvalidArgument("diagonal length does not match 2^n");
    return {n, d.cast<complex>().matrix().asDiagonal()};
  }

  int spins() const { return n_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Matrix &matrix() const { return m_; }
  complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  /// Largest entrywise deviation from Hermiticity.
  double hermiticity_error() const {
    return m_.size() == 0 ? 0.0 : (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  }
  bool is_hermitian(double tol = 1e-12) const {
    return hermiticity_error() <= tol;
  }

  Operator adjoint() const { return {n_, m_.adjoint()}; }

  Operator &operator+=(const Operator &o) {
    check_same(o);
    m_ += o.m_;
    return *this;
  }
  Operator &operator-=(const Operator &o) {
    check_same(o);
    m_ -= o.m_;
    return *this;
  }
  Operator &operator*=(complex s) {
    m_ *= s;
    return *this;
  }

  friend Operator operator+(Operator a, const Operator &b) { return a += b; }
  friend Operator operator-(Operator a, const Operator &b) { return a -= b; }
  friend Operator operator*(complex s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, complex s) { return a *= s; }
  friend Operator operator*(const Operator &a, const Operator &b) {
    a.check_same(b);
    return {a.n_, a.m_ * b.m_};
  }

  /// this * diag(d); the product is Hermitian when d lives on sites this
  /// operator does not touch.
  Operator times_diagonal(const Diagonal &d) const {
    if (d.size() != dim())
      throw InvalidArgument("diagonal length does not match operator dim");
    return {n_, m_ * d.cast<complex>().matrix().asDiagonal()};
  }

private:
  void check_same(const Operator &o) const {
    if (o.n_ != n_)
      throw InvalidArgument("operator spin counts differ: " +
                            std::to_string(n_) + " vs " + std::to_string(o.n_));
  }

  int n_ = 0;
  Matrix m_;
};

inline Operator commutator(const Operator &a, const Operator &b) {
  return a * b - b * a;
}

/// Normalized pure state of n spins.
class StateVector {
public:
  static constexpr double kNormTolerance = 1e-10;

  StateVector(int n_spins, Vector amplitudes)
      : n_(n_spins), amps_(std::move(amplitudes)) {
    check_spin_count(n_);
    if (amps_.size() != hilbert_dim(n_))
      throw InvalidArgument("state length " + std::to_string(amps_.size()) +
                            " does not match 2^" + std::to_string(n_));
    if (std::abs(amps_.norm() - 1.0) > kNormTolerance)
      throw NumericError("state vector is not normalized (norm " +
                         std::to_string(amps_.norm()) + ")");
  }

  static StateVector basis(int n, Eigen::Index index) {
    check_spin_count(n);
    if (index < 0 || index >= hilbert_dim(n))
      throw InvalidArgument("basis index out of range");
    Vector v = Vector::Zero(hilbert_dim(n));
    v(index) = 1.0;
    return {n, std::move(v)};
  }

  int spins() const { return n_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Vector &amplitudes() const { return amps_; }

private:
  int n_;
  Vector amps_;
};

inline Eigen::Matrix2cd pauli_matrix(SpinAxis axis) {
  constexpr complex i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (axis) {
  case SpinAxis::x: m << 0.0, 1.0, 1.0, 0.0; break;
  case SpinAxis::y: m << 0.0, -i, i, 0.0; break;
  case SpinAxis::z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

struct SiteFactor {
  int site;
  SpinAxis axis;
};

/// coefficient * prod_j I_{site_j}^{axis_j} with I = sigma/2, sites distinct.
/// Every factor has one nonzero per column, so the product is filled column
/// by column in O(2^n) without forming Kronecker products.
inline Operator product_operator(int n, const std::vector<SiteFactor> &factors,
                                 double coefficient) {
  check_spin_count(n);
  std::uint64_t used = 0;
  std::uint64_t flip = 0;
  for (const auto &f : factors) {
    if (f.site < 1 || f.site > n)
      throw InvalidArgument("site " + std::to_string(f.site) +
                            " outside 1.." + std::to_string(n));
    const auto mask = site_mask(n, f.site);
    if (used & mask)
      throw InvalidArgument("site " + std::to_string(f.site) +
                            " repeated in product");
    used |= mask;
    if (f.axis != SpinAxis::z) flip |= mask;
  }

  const auto dim = hilbert_dim(n);
  Matrix m = Matrix::Zero(dim, dim);
  for (std::uint64_t col = 0; col < static_cast<std::uint64_t>(dim); ++col) {
    complex value = coefficient;
    for (const auto &f : factors) {
      const bool up = is_up(col, n, f.site);
      switch (f.axis) {
      case SpinAxis::x: value *= 0.5; break;
      case SpinAxis::y: value *= up ? complex{0.0, 0.5} : complex{0.0, -0.5}; break;
      case SpinAxis::z: value *= up ? 0.5 : -0.5; break;
      }
    }
    m(static_cast<Eigen::Index>(col ^ flip), static_cast<Eigen::Index>(col)) = value;
  }
  return {n, std::move(m)};
}

inline Operator site_operator(int n, int k, SpinAxis axis) {
  return product_operator(n, {{k, axis}}, 1.0);
}

/// Diagonal of I_k^z: +1/2 on basis states with spin k up, -1/2 otherwise.
inline Diagonal z_values(int n, int k) {
  check_spin_count(n);
  if (k < 1 || k > n)
    throw InvalidArgument("site " + std::to_string(k) + " outside 1.." +
                          std::to_string(n));
  const auto dim = hilbert_dim(n);
  Diagonal d(dim);
  for (Eigen::Index b = 0; b < dim; ++b)
    d(b) = is_up(static_cast<std::uint64_t>(b), n, k) ? 0.5 : -0.5;
  return d;
}

/// Diagonal of sum_k I_k^z.
inline Diagonal total_z_values(int n) {
  Diagonal d = Diagonal::Zero(hilbert_dim(n));
  for (int k = 1; k <= n; ++k) d += z_values(n, k);
  return d;
}

} // namespace qdomino
