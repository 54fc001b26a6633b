#pragma once

#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

#include "curv4/hodge.hpp"
#include "curv4/types.hpp"

namespace curv4 {

/// Quaternion w + x i + y j + z k with the Hamilton product (i j = k).
/// The space is identified with 4-space by (1, i, j, k) <-> (e1, e2, e3, e4).
template <typename S>
struct Quat {
  S w{1}, x{0}, y{0}, z{0};

  Vec4<S> vec() const { return Vec4<S>(w, x, y, z); }
  static Quat from_vec(const Vec4<S>& v) { return {v[0], v[1], v[2], v[3]}; }
};

template <typename S>
Quat<S> qmul(const Quat<S>& a, const Quat<S>& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

template <typename S>
Quat<S> qconj(const Quat<S>& a) {
  return {a.w, -a.x, -a.y, -a.z};
}

template <typename S>
S qnorm(const Quat<S>& a) {
  return std::sqrt(a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z);
}

template <typename S>
Quat<S> operator-(const Quat<S>& a) {
  return {-a.w, -a.x, -a.y, -a.z};
}

/// Element of the unit sphere of quaternions; normalized on construction and
/// after every product.
template <typename S>
class UnitQuaternion {
 public:
  UnitQuaternion() = default;
  explicit UnitQuaternion(const Quat<S>& q) : q_(q) {
    const S n = qnorm(q);
    if (!(n > S(0))) throw std::invalid_argument("curv4: cannot normalize a zero quaternion");
    q_.w /= n;
    q_.x /= n;
    q_.y /= n;
    q_.z /= n;
  }
  UnitQuaternion(S w, S x, S y, S z) : UnitQuaternion(Quat<S>{w, x, y, z}) {}

  const Quat<S>& quat() const { return q_; }
  S w() const { return q_.w; }
  S x() const { return q_.x; }
  S y() const { return q_.y; }
  S z() const { return q_.z; }

  UnitQuaternion conj() const {
    UnitQuaternion r;
    r.q_ = qconj(q_);
    return r;
  }
  UnitQuaternion negated() const {
    UnitQuaternion r;
    r.q_ = -q_;
    return r;
  }

  friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
    return UnitQuaternion(qmul(a.q_, b.q_));
  }

 private:
  Quat<S> q_{};
};

/// Pair (p, q) modulo the simultaneous sign change (-p, -q).
template <typename S>
class QuatPair {
 public:
  QuatPair() = default;
  QuatPair(const UnitQuaternion<S>& p, const UnitQuaternion<S>& q) : p_(p), q_(q) {}

  const UnitQuaternion<S>& p() const { return p_; }
  const UnitQuaternion<S>& q() const { return q_; }

  /// Representative with the first nonzero component of p positive.
  QuatPair canonical() const {
    const Vec4<S> v = p_.quat().vec();
    for (int k = 0; k < 4; ++k) {
      if (v[k] > S(0)) return *this;
      if (v[k] < S(0)) return QuatPair(p_.negated(), q_.negated());
    }
    return *this;
  }

 private:
  UnitQuaternion<S> p_;
  UnitQuaternion<S> q_;
};

namespace detail {

template <typename S>
void check_unit(const Quat<S>& q) {
  if (std::abs(qnorm(q) - S(1)) > S(1e-9))
    throw std::invalid_argument("curv4: quaternion is not unit");
}

}  // namespace detail

/// Rotation of the pure-quaternion 3-space by x -> p x conj(p). Columns are
/// the images of i, j, k; p and -p give the same matrix.
template <typename S>
Mat3<S> so3_from_unit(const UnitQuaternion<S>& p) {
  Mat3<S> m;
  const Quat<S> axes[3] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  for (int k = 0; k < 3; ++k) {
    const Quat<S> img = qmul(qmul(p.quat(), axes[k]), qconj(p.quat()));
    m(0, k) = img.x;
    m(1, k) = img.y;
    m(2, k) = img.z;
  }
  return m;
}

template <typename S>
Mat3<S> so3_from_unit(const Quat<S>& p) {
  detail::check_unit(p);
  UnitQuaternion<S> u(p);
  return so3_from_unit(u);
}

/// Rotation of 4-space by x -> p x conj(q), as the frame with columns
/// p conj(q), p i conj(q), p j conj(q), p k conj(q).
template <typename S>
Frame<S> so4_from_pair(const QuatPair<S>& pq) {
  const Quat<S> axes[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  const Quat<S> qc = qconj(pq.q().quat());
  Mat4<S> m;
  for (int k = 0; k < 4; ++k) m.col(k) = qmul(qmul(pq.p().quat(), axes[k]), qc).vec();
  return Frame<S>::from_matrix(m);
}

/// 4x4 matrix of left multiplication x -> v x by a pure quaternion v; the
/// matching bivector is self-dual.
template <typename S>
Mat4<S> left_mult_op(const Quat<S>& v) {
  if (std::abs(v.w) > S(1e-12) * std::max(S(1), qnorm(v)))
    throw std::invalid_argument("curv4: left_mult_op needs a pure quaternion");
  Mat4<S> m;
  m << S(0), -v.x, -v.y, -v.z,
       v.x,  S(0), -v.z,  v.y,
       v.y,  v.z,  S(0), -v.x,
       v.z, -v.y,  v.x,  S(0);
  return m;
}

/// Right multiplication x -> x v; the matching bivector is anti-self-dual.
template <typename S>
Mat4<S> right_mult_op(const Quat<S>& v) {
  if (std::abs(v.w) > S(1e-12) * std::max(S(1), qnorm(v)))
    throw std::invalid_argument("curv4: right_mult_op needs a pure quaternion");
  Mat4<S> m;
  m << S(0), -v.x, -v.y, -v.z,
       v.x,  S(0),  v.z, -v.y,
       v.y, -v.z,  S(0),  v.x,
       v.z,  v.y, -v.x,  S(0);
  return m;
}

/// Max deviation between the (anti-)self-dual bases of so4_from_pair(p, q)
/// and the so3_from_unit(p), so3_from_unit(q) images of the identity bases.
template <typename S>
S equivariance_check(const QuatPair<S>& pq) {
  const PMBases<S> pm = pm_bases(so4_from_pair(pq));
  const PMBases<S> pm0 = pm_bases(Frame<S>::identity());
  const Mat3<S> rp = so3_from_unit(pq.p());
  const Mat3<S> rq = so3_from_unit(pq.q());
  S worst = S(0);
  for (int k = 0; k < 3; ++k) {
    Bivector<S> want_p = Bivector<S>::Zero();
    Bivector<S> want_m = Bivector<S>::Zero();
    for (int m = 0; m < 3; ++m) {
      want_p += rp(m, k) * pm0.plus[m];
      want_m += rq(m, k) * pm0.minus[m];
    }
    worst = std::max(worst, (pm.plus[k] - want_p).template lpNorm<Eigen::Infinity>());
    worst = std::max(worst, (pm.minus[k] - want_m).template lpNorm<Eigen::Infinity>());
  }
  return worst;
}

/// Unit quaternion with so3_from_unit(p) equal to a given rotation.
template <typename S>
UnitQuaternion<S> unit_from_so3(const Mat3<S>& rot) {
  const Eigen::Quaternion<S> q(rot);
  return UnitQuaternion<S>(q.w(), q.x(), q.y(), q.z());
}

using Quatd = Quat<double>;
using UnitQuaterniond = UnitQuaternion<double>;
using QuatPaird = QuatPair<double>;

}  // namespace curv4
