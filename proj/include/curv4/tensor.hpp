#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <string>

#include "curv4/types.hpp"

namespace curv4 {

namespace detail {

// R_{ijkl} in the standard basis, 0-based indices, straight table lookup.
template <typename S>
S comp(const Mat6<S>& a, int i, int j, int k, int l) {
  if (i == j || k == l) return S(0);
  const S sgn = S(pair_lut.sign[i][j] * pair_lut.sign[k][l]);
  return sgn * a(pair_lut.index[i][j], pair_lut.index[k][l]);
}

template <typename S>
using Comp4 = std::array<std::array<std::array<std::array<S, 4>, 4>, 4>, 4>;

template <typename S>
Comp4<S> components4(const CurvTensor<S>& r) {
  Comp4<S> c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) c[i][j][k][l] = comp(r.matrix(), i, j, k, l);
  return c;
}

}  // namespace detail

/// R(u_i ^ u_j, u_k ^ u_l) in the frame F. Indices are 1-based as in the
/// component notation R_{ijkl}.
template <typename S>
S component(const CurvTensor<S>& r, const Frame<S>& f, int i, int j, int k, int l) {
  detail::check_index(i);
  detail::check_index(j);
  detail::check_index(k);
  detail::check_index(l);
  if (i == j || k == l) throw std::invalid_argument("curv4: component needs i != j and k != l");
  const Bivector<S> left = wedge<S>(f.column(i - 1), f.column(j - 1));
  const Bivector<S> right = wedge<S>(f.column(k - 1), f.column(l - 1));
  return left.dot(r.matrix() * right);
}

template <typename S>
S component(const CurvTensor<S>& r, int i, int j, int k, int l) {
  return component(r, Frame<S>::identity(), i, j, k, l);
}

/// Matrix of the induced rotation of bivectors: column k holds Fe_i ^ Fe_j
/// for the k-th basis pair.
template <typename S>
Mat6<S> lambda2_matrix(const Frame<S>& f) {
  Mat6<S> g;
  for (int k = 0; k < 6; ++k) {
    const int i = detail::biv_pair[k][0];
    const int j = detail::biv_pair[k][1];
    g.col(k) = wedge<S>(f.column(i), f.column(j));
  }
  return g;
}

/// Components of R in the basis F, i.e. the pull-back G^T A G by the induced
/// bivector rotation G. rotate(R, I) = R and
/// rotate(rotate(R, F), H) = rotate(R, F*H).
template <typename S>
CurvTensor<S> rotate(const CurvTensor<S>& r, const Frame<S>& f) {
  const Mat6<S> g = lambda2_matrix(f);
  return CurvTensor<S>(g.transpose() * r.matrix() * g);
}

/// Ricci contraction r_ij = sum_k R_ikjk.
template <typename S>
Sym2<S> ricci(const CurvTensor<S>& r) {
  Mat4<S> m;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      S v = S(0);
      for (int k = 0; k < 4; ++k) v += detail::comp(r.matrix(), i, k, j, k);
      m(i, j) = v;
      m(j, i) = v;
    }
  return Sym2<S>(m);
}

/// Scalar curvature; equals twice the trace of the 6x6 form.
template <typename S>
S scalar(const CurvTensor<S>& r) {
  return S(2) * r.matrix().trace();
}

/// Trace-free part of the Ricci contraction, e = r - (s/4) g.
template <typename S>
Sym2<S> einstein(const CurvTensor<S>& r) {
  return ricci(r) - (scalar(r) / S(4)) * Sym2<S>::metric();
}

/// The product (h, k) -> h_ik k_jl + k_ik h_jl - h_il k_jk - k_il h_jk,
/// an algebraic curvature tensor for symmetric h, k.
template <typename S>
CurvTensor<S> kn_product(const Sym2<S>& h, const Sym2<S>& k) {
  Mat6<S> a;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      const int i = detail::biv_pair[p][0];
      const int j = detail::biv_pair[p][1];
      const int m = detail::biv_pair[q][0];
      const int n = detail::biv_pair[q][1];
      a(p, q) = h(i, m) * k(j, n) + k(i, m) * h(j, n) - h(i, n) * k(j, m) - k(i, n) * h(j, m);
    }
  return CurvTensor<S>(a);
}

/// R_ijkl = b_ik b_jl - b_il b_jk (half of kn_product(b, b)).
template <typename S>
CurvTensor<S> kn_square(const Sym2<S>& b) {
  return S(0.5) * kn_product(b, b);
}

/// Totally trace-free part of R. The 6x6 form of the result commutes with
/// the Hodge star matrix and has vanishing Ricci contraction.
template <typename S>
CurvTensor<S> weyl(const CurvTensor<S>& r) {
  const Sym2<S> e = einstein(r);
  const S s = scalar(r);
  const Sym2<S> g = Sym2<S>::metric();
  return r - S(0.5) * kn_product(e, g) - (s / S(24)) * kn_product(g, g);
}

/// trc_ij = sum_{k,p,q} R_ikpq R_jkpq.
template <typename S>
Sym2<S> triple_contraction(const CurvTensor<S>& r) {
  const auto c = detail::components4(r);
  Mat4<S> m;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      S v = S(0);
      for (int k = 0; k < 4; ++k)
        for (int p = 0; p < 4; ++p)
          for (int q = 0; q < 4; ++q) v += c[i][k][p][q] * c[j][k][p][q];
      m(i, j) = v;
      m(j, i) = v;
    }
  return Sym2<S>(m);
}

/// [Rb]_ij = R_ipjq b_pq for symmetric b.
template <typename S>
Sym2<S> act_on_sym2(const CurvTensor<S>& r, const Sym2<S>& b) {
  const auto c = detail::components4(r);
  Mat4<S> m;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      S v = S(0);
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) v += c[i][p][j][q] * b(p, q);
      m(i, j) = v;
      m(j, i) = v;
    }
  return Sym2<S>(m);
}

/// Action on a bivector. With [Rb]_ij = (1/2) R_ijpq b_pq and the orthonormal
/// basis above, the coefficient vector simply maps through the 6x6 form.
template <typename S>
Bivector<S> act_on_bivector(const CurvTensor<S>& r, const Bivector<S>& b) {
  return r.matrix() * b;
}

template <typename S>
struct SymEigen3 {
  Vec3<S> values;   // ascending
  Mat3<S> vectors;  // orthonormal columns, det +1
};

template <typename S>
struct SymEigen4 {
  Vec4<S> values;
  Mat4<S> vectors;
};

namespace detail {

template <typename M>
void force_positive_det(M& v) {
  if (v.determinant() < 0) v.col(v.cols() - 1) *= -1;
}

}  // namespace detail

/// Eigenvalues (ascending) and eigenvectors of a symmetric 3x3 matrix; the
/// eigenvector matrix is forced to determinant +1.
template <typename S>
SymEigen3<S> sym_eigen(const Mat3<S>& m) {
  const S defect = (m - m.transpose()).template lpNorm<Eigen::Infinity>();
  if (!(defect <= S(1e-12) * std::max(S(1), m.template lpNorm<Eigen::Infinity>())))
    throw std::invalid_argument("curv4: sym_eigen needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Mat3<S>> es(S(0.5) * (m + m.transpose()));
  SymEigen3<S> out{es.eigenvalues(), es.eigenvectors()};
  detail::force_positive_det(out.vectors);
  return out;
}

template <typename S>
SymEigen4<S> sym_eigen(const Sym2<S>& m) {
  Eigen::SelfAdjointEigenSolver<Mat4<S>> es(m.matrix());
  SymEigen4<S> out{es.eigenvalues(), es.eigenvectors()};
  detail::force_positive_det(out.vectors);
  return out;
}

/// Spectrum of the Einstein tensor with multiplicity clustering.
template <typename S>
struct SpectralData {
  Vec4<S> mu;               // ascending
  Frame<S> frame;           // columns are the matching eigenvectors, det +1
  std::string multiplicity; // one of "4", "31", "22", "211", "1111"
  S cluster_tol;            // relative gap tolerance that produced the string
};

}  // namespace curv4
