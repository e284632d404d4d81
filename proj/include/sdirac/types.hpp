#pragma once

#include <algorithm>
#include <complex>
#include <vector>

namespace sdirac {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Column vector of a 2x2 system.
struct Vec2 {
  cplx c1{}, c2{};

  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.c1 + b.c1, a.c2 + b.c2}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.c1 - b.c1, a.c2 - b.c2}; }
  friend Vec2 operator*(cplx s, const Vec2& v) { return {s * v.c1, s * v.c2}; }
  Vec2& operator+=(const Vec2& o) {
    c1 += o.c1;
    c2 += o.c2;
    return *this;
  }
  double norm_inf() const { return std::max(std::abs(c1), std::abs(c2)); }
};

/// Dense complex 2x2 matrix, row-major entries a_ij.
///
/// All products are evaluated in a fixed order, so identical inputs give
/// bitwise identical outputs.
struct Mat2 {
  cplx a11{}, a12{}, a21{}, a22{};

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {}; }
  static Mat2 from_columns(const Vec2& c1, const Vec2& c2) { return {c1.c1, c2.c1, c1.c2, c2.c2}; }

  Vec2 col1() const { return {a11, a21}; }
  Vec2 col2() const { return {a12, a22}; }
  Vec2 col(int j) const { return j == 0 ? col1() : col2(); }

  cplx det() const { return a11 * a22 - a12 * a21; }
  cplx trace() const { return a11 + a22; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  Mat2 inverse() const {
    const cplx d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }
  double norm_inf() const {
    return std::max(std::abs(a11) + std::abs(a12), std::abs(a21) + std::abs(a22));
  }
  double max_abs() const {
    return std::max(std::max(std::abs(a11), std::abs(a12)), std::max(std::abs(a21), std::abs(a22)));
  }

  friend Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
  }
  friend Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
  }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
  }
  friend Vec2 operator*(const Mat2& a, const Vec2& v) {
    return {a.a11 * v.c1 + a.a12 * v.c2, a.a21 * v.c1 + a.a22 * v.c2};
  }
  friend Mat2 operator*(cplx s, const Mat2& a) { return {s * a.a11, s * a.a12, s * a.a21, s * a.a22}; }
  Mat2& operator+=(const Mat2& o) { return *this = *this + o; }
  Mat2& operator-=(const Mat2& o) { return *this = *this - o; }
};

/// The symplectic matrix B = [[0, 1], [-1, 0]].
inline constexpr Mat2 kB{0.0, 1.0, -1.0, 0.0};

/// Rank-one product y z^T.
inline Mat2 outer(const Vec2& y, const Vec2& z) {
  return {y.c1 * z.c1, y.c1 * z.c2, y.c2 * z.c1, y.c2 * z.c2};
}

/// <y, z> = y^T B z, the Wronskian of two solutions.
inline cplx wronskian(const Vec2& y, const Vec2& z) { return y.c1 * z.c2 - y.c2 * z.c1; }

/// Matrix value together with its derivative in the spectral parameter.
struct Jet2 {
  Mat2 value;
  Mat2 deriv;

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
  }
  Jet2 inverse() const {
    const Mat2 inv = value.inverse();
    return {inv, Mat2::zero() - inv * deriv * inv};
  }
  static Jet2 constant(const Mat2& m) { return {m, Mat2::zero()}; }
};

/// V(alpha) = [[cos a, -sin a], [sin a, cos a]].
Mat2 rotation(double alpha);

/// Sector of the lambda plane used by the asymptotic formulas.
///
/// pi_index = 0 for arg in (-pi/2, pi/2], +1 for (pi/2, pi], -1 for
/// (-pi, -pi/2]. l = -1 exactly on the pi_index = 0 sector.
struct SectorIndex {
  int l = -1;
  int pi_index = 0;
  friend bool operator==(const SectorIndex&, const SectorIndex&) = default;
};

SectorIndex sector_of(cplx lambda);

struct Singularity {
  double gamma = 0.0;
  cplx mu{};
  double eta = 0.0;
};

/// nu = min{1, 2 Re mu_k}.
double nu_exponent(const std::vector<Singularity>& singularities);

struct SpectralDatum {
  int k = 0;
  cplx lambda{};
  cplx a{};
};

/// Spectral data {lambda_k, a_k} on the contiguous index range [-K, K].
class SpectralData {
 public:
  SpectralData() = default;
  /// Takes data sorted by index; throws ValidationError when the indices are not
  /// exactly -K..K, an eigenvalue repeats or a residue vanishes.
  explicit SpectralData(std::vector<SpectralDatum> data);

  int K() const { return static_cast<int>(data_.size() / 2); }
  std::size_t size() const { return data_.size(); }
  const std::vector<SpectralDatum>& data() const { return data_; }
  const SpectralDatum& at(int k) const { return data_.at(static_cast<std::size_t>(k + K())); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  /// Largest |Im lambda_k|.
  double max_imag() const;
  /// Throws when some |Im lambda_k| exceeds h.
  void check_strip(double h) const;

 private:
  std::vector<SpectralDatum> data_;
};

}  // namespace sdirac
