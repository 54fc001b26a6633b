#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>

namespace curv4 {

template <typename S> using Vec3 = Eigen::Matrix<S, 3, 1>;
template <typename S> using Vec4 = Eigen::Matrix<S, 4, 1>;
template <typename S> using Vec6 = Eigen::Matrix<S, 6, 1>;
template <typename S> using Mat3 = Eigen::Matrix<S, 3, 3>;
template <typename S> using Mat4 = Eigen::Matrix<S, 4, 4>;
template <typename S> using Mat6 = Eigen::Matrix<S, 6, 6>;

/// Coefficients of a 2-form in the fixed bivector basis
///   b1 = e1^e2, b2 = e1^e3, b3 = e1^e4, b4 = e3^e4, b5 = e4^e2, b6 = e2^e3.
/// The ordering is fixed repo-wide; entries k and k+3 are Hodge-dual partners.
template <typename S> using Bivector = Vec6<S>;

namespace detail {

// 0-based index pairs of the bivector basis, in basis order.
inline constexpr std::array<std::array<int, 2>, 6> biv_pair = {
    {{{0, 1}}, {{0, 2}}, {{0, 3}}, {{2, 3}}, {{3, 1}}, {{1, 2}}}};

struct PairLookup {
  std::array<std::array<int, 4>, 4> index{};
  std::array<std::array<int, 4>, 4> sign{};
  constexpr PairLookup() {
    for (auto& row : index) row.fill(-1);
    for (auto& row : sign) row.fill(0);
    for (int k = 0; k < 6; ++k) {
      const int i = biv_pair[k][0];
      const int j = biv_pair[k][1];
      index[i][j] = k;
      sign[i][j] = 1;
      index[j][i] = k;
      sign[j][i] = -1;
    }
  }
};
inline constexpr PairLookup pair_lut{};

inline void check_index(int i) {
  if (i < 1 || i > 4) throw std::invalid_argument("curv4: index out of range, expected 1..4");
}

}  // namespace detail

/// u ^ v as a coefficient vector; the coefficients are the 2x2 minors of
/// (u, v) read in the basis ordering above.
template <typename S>
Bivector<S> wedge(const Vec4<S>& u, const Vec4<S>& v) {
  Bivector<S> b;
  for (int k = 0; k < 6; ++k) {
    const int i = detail::biv_pair[k][0];
    const int j = detail::biv_pair[k][1];
    b[k] = u[i] * v[j] - u[j] * v[i];
  }
  return b;
}

/// The skew endomorphism of a bivector: on generators,
/// (u ^ v) w = <u,w> v - <v,w> u.
template <typename S>
Mat4<S> to_skew_operator(const Bivector<S>& b) {
  Mat4<S> m = Mat4<S>::Zero();
  for (int k = 0; k < 6; ++k) {
    const int i = detail::biv_pair[k][0];
    const int j = detail::biv_pair[k][1];
    m(j, i) += b[k];
    m(i, j) -= b[k];
  }
  return m;
}

/// Inverse of to_skew_operator; the input is antisymmetrized first.
template <typename S>
Bivector<S> bivector_from_skew(const Mat4<S>& m) {
  Bivector<S> b;
  for (int k = 0; k < 6; ++k) {
    const int i = detail::biv_pair[k][0];
    const int j = detail::biv_pair[k][1];
    b[k] = S(0.5) * (m(j, i) - m(i, j));
  }
  return b;
}

/// Symmetric (0,2) tensor on 4-space. Construction symmetrizes exactly, so
/// (i,j) and (j,i) always hold the identical value.
template <typename S>
class Sym2 {
 public:
  Sym2() : m_(Mat4<S>::Zero()) {}
  explicit Sym2(const Mat4<S>& m) : m_(S(0.5) * (m + m.transpose())) {}

  static Sym2 zero() { return Sym2(); }
  static Sym2 metric() { return Sym2(Mat4<S>::Identity()); }
  static Sym2 diagonal(const Vec4<S>& d) { return Sym2(Mat4<S>(d.asDiagonal())); }

  S operator()(int i, int j) const { return m_(i, j); }
  const Mat4<S>& matrix() const { return m_; }
  S trace() const { return m_.trace(); }
  S norm() const { return m_.norm(); }

  Sym2 operator+(const Sym2& o) const { return Sym2(m_ + o.m_); }
  Sym2 operator-(const Sym2& o) const { return Sym2(m_ - o.m_); }
  Sym2 operator*(S a) const { return Sym2(m_ * a); }

 private:
  Mat4<S> m_;
};

template <typename S>
Sym2<S> operator*(S a, const Sym2<S>& m) {
  return m * a;
}

/// Algebraic curvature tensor, stored as the symmetric 6x6 bilinear form
/// A(k,l) = R(b_k, b_l) on the bivector basis. In this ordering the first
/// Bianchi identity reads A(0,3) + A(1,4) + A(2,5) = 0.
template <typename S>
class CurvTensor {
 public:
  CurvTensor() : a_(Mat6<S>::Zero()) {}
  explicit CurvTensor(const Mat6<S>& a) : a_(S(0.5) * (a + a.transpose())) {}

  const Mat6<S>& matrix() const { return a_; }
  S bianchi_defect() const { return a_(0, 3) + a_(1, 4) + a_(2, 5); }
  S norm() const { return a_.norm(); }

  CurvTensor operator+(const CurvTensor& o) const { return CurvTensor(a_ + o.a_); }
  CurvTensor operator-(const CurvTensor& o) const { return CurvTensor(a_ - o.a_); }
  CurvTensor operator*(S c) const { return CurvTensor(a_ * c); }

 private:
  Mat6<S> a_;
};

template <typename S>
CurvTensor<S> operator*(S c, const CurvTensor<S>& r) {
  return r * c;
}

/// Residuals are reported relative to this scale.
template <typename S>
S scale_of(const CurvTensor<S>& r) {
  return std::max(S(1), r.norm());
}

/// Positive orthonormal basis of 4-space; the columns are the basis vectors.
template <typename S>
class Frame {
 public:
  Frame() : m_(Mat4<S>::Identity()) {}

  static Frame identity() { return Frame(); }

  /// Validates orthogonality (Gram defect <= tol) and orientation (det > 0).
  static Frame from_matrix(const Mat4<S>& m, S tol = S(1e-9)) {
    const S defect = (m.transpose() * m - Mat4<S>::Identity()).template lpNorm<Eigen::Infinity>();
    if (!(defect <= tol)) throw std::invalid_argument("curv4: frame is not orthonormal");
    if (!(m.determinant() > S(0)))
      throw std::invalid_argument("curv4: frame is not positively oriented");
    Frame f;
    f.m_ = m;
    return f;
  }

  const Mat4<S>& matrix() const { return m_; }
  Vec4<S> column(int k) const { return m_.col(k); }

 private:
  Mat4<S> m_;
};

using Vec3d = Vec3<double>;
using Vec4d = Vec4<double>;
using Vec6d = Vec6<double>;
using Mat3d = Mat3<double>;
using Mat4d = Mat4<double>;
using Mat6d = Mat6<double>;
using Bivectord = Bivector<double>;
using Sym2d = Sym2<double>;
using CurvTensord = CurvTensor<double>;
using Framed = Frame<double>;

}  // namespace curv4
