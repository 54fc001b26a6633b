#pragma once

#include <array>

#include "curv4/tensor.hpp"
#include "curv4/types.hpp"

namespace curv4 {

/// Hodge star on bivector coefficients. In the fixed basis ordering the
/// matrix is [[0, I3], [I3, 0]]; it is symmetric and involutive.
template <typename S>
Mat6<S> star_matrix() {
  Mat6<S> m = Mat6<S>::Zero();
  for (int k = 0; k < 3; ++k) {
    m(k, k + 3) = S(1);
    m(k + 3, k) = S(1);
  }
  return m;
}

/// The norm-sqrt(2) bases of the self-dual and anti-self-dual subspaces
/// attached to a frame u1..u4:
///   s+-_1 = u1^u2 +- u3^u4,  s+-_2 = u1^u3 +- u4^u2,  s+-_3 = u1^u4 +- u2^u3.
template <typename S>
struct PMBases {
  std::array<Bivector<S>, 3> plus;
  std::array<Bivector<S>, 3> minus;
};

template <typename S>
PMBases<S> pm_bases(const Frame<S>& f) {
  PMBases<S> pm;
  for (int k = 0; k < 3; ++k) {
    const auto& a = detail::biv_pair[k];
    const auto& b = detail::biv_pair[k + 3];
    const Bivector<S> head = wedge<S>(f.column(a[0]), f.column(a[1]));
    const Bivector<S> tail = wedge<S>(f.column(b[0]), f.column(b[1]));
    pm.plus[k] = head + tail;
    pm.minus[k] = head - tail;
  }
  return pm;
}

template <typename S>
struct WeylBlocks {
  Mat3<S> plus;
  Mat3<S> minus;
};

/// 3x3 blocks of the Weyl part of R on the (anti-)self-dual bases of F,
/// scaled so that diagonal entries are the Weyl eigenvalues:
/// entry (k,l) = W(s_k, s_l) / 2.
template <typename S>
WeylBlocks<S> w_pm_blocks(const CurvTensor<S>& r, const Frame<S>& f) {
  const Mat6<S> w = weyl(r).matrix();
  const PMBases<S> pm = pm_bases(f);
  WeylBlocks<S> out;
  for (int k = 0; k < 3; ++k)
    for (int l = k; l < 3; ++l) {
      const S vp = S(0.5) * pm.plus[k].dot(w * pm.plus[l]);
      const S vm = S(0.5) * pm.minus[k].dot(w * pm.minus[l]);
      out.plus(k, l) = vp;
      out.plus(l, k) = vp;
      out.minus(k, l) = vm;
      out.minus(l, k) = vm;
    }
  return out;
}

/// Mixed block W(s+_k, s-_l) / 2; vanishes identically for the Weyl part.
template <typename S>
Mat3<S> w_cross_block(const CurvTensor<S>& r, const Frame<S>& f) {
  const Mat6<S> w = weyl(r).matrix();
  const PMBases<S> pm = pm_bases(f);
  Mat3<S> out;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) out(k, l) = S(0.5) * pm.plus[k].dot(w * pm.minus[l]);
  return out;
}

}  // namespace curv4
