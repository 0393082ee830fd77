#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qwgw {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

enum class ErrorKind { kConfig, kGeometry, kDomain, kConsistency, kIo };

/// Base of every error thrown by the library. The kind decides the status
/// code reported through the C API and the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::kConfig, w) {}
};
/// Singular or malformed triads, cosine matrices that cannot be inverted.
struct GeometryError : Error {
  explicit GeometryError(const std::string& w) : Error(ErrorKind::kGeometry, w) {}
};
/// Inputs outside the domain of a formula (sign conditions, q = 0, ...).
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::kDomain, w) {}
};
/// A numerical self-check failed.
struct ConsistencyError : Error {
  explicit ConsistencyError(const std::string& w) : Error(ErrorKind::kConsistency, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::kIo, w) {}
};

/// Two-component coin state (psi^-, psi^+) at one site.
struct Spinor2 {
  Complex minus{};
  Complex plus{};

  double norm2() const { return std::norm(minus) + std::norm(plus); }
  bool finite() const {
    return std::isfinite(minus.real()) && std::isfinite(minus.imag()) &&
           std::isfinite(plus.real()) && std::isfinite(plus.imag());
  }

  Spinor2& operator+=(const Spinor2& o) {
    minus += o.minus;
    plus += o.plus;
    return *this;
  }
  Spinor2& operator-=(const Spinor2& o) {
    minus -= o.minus;
    plus -= o.plus;
    return *this;
  }
  Spinor2& operator*=(Complex s) {
    minus *= s;
    plus *= s;
    return *this;
  }
  friend Spinor2 operator+(Spinor2 a, const Spinor2& b) { return a += b; }
  friend Spinor2 operator-(Spinor2 a, const Spinor2& b) { return a -= b; }
  friend Spinor2 operator*(Complex s, Spinor2 a) { return a *= s; }
  friend bool operator==(const Spinor2&, const Spinor2&) = default;
};

/// Complex 2x2 matrix, row-major.
struct Mat2 {
  std::array<Complex, 4> m{};

  Complex& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
  const Complex& operator()(int r, int c) const {
    return m[static_cast<std::size_t>(2 * r + c)];
  }

  static Mat2 identity() { return {{Complex{1.0}, Complex{}, Complex{}, Complex{1.0}}}; }
  static Mat2 zero() { return {}; }
  static Mat2 diag(Complex a, Complex d) { return {{a, Complex{}, Complex{}, d}}; }

  Mat2 adjoint() const {
    return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
  }
  Complex trace() const { return m[0] + m[3]; }
  Complex det() const { return m[0] * m[3] - m[1] * m[2]; }

  Mat2& operator+=(const Mat2& o) {
    for (std::size_t i = 0; i < 4; ++i) m[i] += o.m[i];
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    for (std::size_t i = 0; i < 4; ++i) m[i] -= o.m[i];
    return *this;
  }
  Mat2& operator*=(Complex s) {
    for (auto& x : m) x *= s;
    return *this;
  }
  friend Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend Mat2 operator*(Complex s, Mat2 a) { return a *= s; }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
             a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
  }
  friend Spinor2 operator*(const Mat2& a, const Spinor2& v) {
    return {a.m[0] * v.minus + a.m[1] * v.plus, a.m[2] * v.minus + a.m[3] * v.plus};
  }
};

/// Largest entry modulus of a - b.
inline double max_abs_diff(const Mat2& a, const Mat2& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

inline double max_abs(const Mat2& a) { return max_abs_diff(a, Mat2::zero()); }

inline bool is_unitary(const Mat2& a, double tol = 1e-12) {
  return max_abs_diff(a.adjoint() * a, Mat2::identity()) <= tol;
}

/// The four walk angles theta^{kl} at one spacetime point, in radians.
struct AngleSet {
  double t11 = 0.0;
  double t12 = kPi / 2;
  double t21 = kPi / 2;
  double t22 = 0.0;

  /// Flat space: identity cosine matrix.
  static AngleSet flat() { return {}; }
  bool finite() const {
    return std::isfinite(t11) && std::isfinite(t12) && std::isfinite(t21) &&
           std::isfinite(t22);
  }
};

enum class AngleIndex { k11, k12, k21, k22 };

inline double angle_of(const AngleSet& a, AngleIndex which) {
  switch (which) {
    case AngleIndex::k11: return a.t11;
    case AngleIndex::k12: return a.t12;
    case AngleIndex::k21: return a.t21;
    case AngleIndex::k22: return a.t22;
  }
  return 0.0;
}

}  // namespace qwgw
