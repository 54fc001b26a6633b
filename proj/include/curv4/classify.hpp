#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "curv4/families.hpp"
#include "curv4/hodge.hpp"
#include "curv4/quaternion.hpp"
#include "curv4/tensor.hpp"
#include "curv4/types.hpp"

namespace curv4 {

template <typename S>
struct WeaklyEinsteinResult {
  bool weakly_einstein;
  S residual_contraction;  // |trc R - (tr/4) g| / scale
  S residual_identity;     // |6 W e + s e| / scale
  S residual;              // max of the two
  S scale;
};

/// Decision procedure. Both characterizations are evaluated: the triple
/// contraction must be a multiple of the metric, and 6 W e = -s e must hold;
/// the verdict requires both residuals <= tol.
template <typename S>
WeaklyEinsteinResult<S> is_weakly_einstein(const CurvTensor<S>& r, S tol = S(1e-9)) {
  if (!(tol > S(0))) throw std::invalid_argument("curv4: tol must be positive");
  const S scale = scale_of(r);
  const Sym2<S> trc = triple_contraction(r);
  const Sym2<S> dev = trc - (trc.trace() / S(4)) * Sym2<S>::metric();
  const Sym2<S> e = einstein(r);
  const S s = scalar(r);
  const Sym2<S> idn = S(6) * act_on_sym2(weyl(r), e) + s * e;
  WeaklyEinsteinResult<S> out;
  out.scale = scale;
  out.residual_contraction = dev.norm() / scale;
  out.residual_identity = idn.norm() / scale;
  out.residual = std::max(out.residual_contraction, out.residual_identity);
  out.weakly_einstein = out.residual <= tol;
  return out;
}

namespace detail {

template <typename S>
std::vector<int> cluster_sizes(const Vec4<S>& ascending, S threshold) {
  std::vector<int> sizes{1};
  for (int k = 1; k < 4; ++k) {
    if (ascending[k] - ascending[k - 1] <= threshold)
      ++sizes.back();
    else
      sizes.push_back(1);
  }
  return sizes;
}

inline std::string multiplicity_string(std::vector<int> sizes) {
  std::sort(sizes.begin(), sizes.end(), std::greater<int>());
  std::string s;
  for (int n : sizes) s += static_cast<char>('0' + n);
  return s;
}

}  // namespace detail

/// Eigenvalues of the Einstein tensor in ascending order, the eigenvector
/// frame, and the multiplicity string at the relative gap tolerance tol.
template <typename S>
SpectralData<S> einstein_spectrum(const CurvTensor<S>& r, S tol = S(1e-7)) {
  if (!(tol > S(0))) throw std::invalid_argument("curv4: tol must be positive");
  const Sym2<S> e = einstein(r);
  const auto eg = sym_eigen(e);
  const S thr = tol * std::max(S(1), e.norm());
  SpectralData<S> out;
  out.mu = eg.values;
  out.frame = Frame<S>::from_matrix(eg.vectors);
  out.multiplicity = detail::multiplicity_string(detail::cluster_sizes(eg.values, thr));
  out.cluster_tol = tol;
  return out;
}

/// 4x3 coefficient matrix tying the three diagonal Weyl components to the
/// Einstein eigenvalues, with its numerical rank.
template <typename S>
struct MuMatrix {
  Eigen::Matrix<S, 4, 3> matrix;
  int rank;
  S tol;
};

template <typename S>
MuMatrix<S> mu_matrix(const Vec4<S>& mu, S tol = S(1e-9)) {
  detail::check_trace_free("einstein eigenvalues", mu.sum(),
                           mu.template lpNorm<Eigen::Infinity>());
  Eigen::Matrix<S, 4, 3> m;
  m << mu[1], mu[2], mu[3],
       mu[0], mu[3], mu[2],
       mu[3], mu[0], mu[1],
       mu[2], mu[1], mu[0];
  Eigen::JacobiSVD<Eigen::Matrix<S, 4, 3>> svd(m);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int k = 0; k < 3; ++k)
    if (sv[k] > tol * sv[0]) ++rank;
  return {m, rank, tol};
}

template <typename S>
int rank_rho(const Vec4<S>& mu, S tol = S(1e-9)) {
  return mu_matrix(mu, tol).rank;
}

/// Affine solution set of M(mu) a = -(s/6) mu intersected with {sum a = 0}.
template <typename S>
struct MuSolution {
  int rank;                     // rank of the 4x3 coefficient matrix
  int dim;                      // dimension of the solution set
  Vec3<S> point;                // minimum-norm solution
  std::array<Vec3<S>, 2> dirs;  // orthonormal directions, first `dim` valid
};

template <typename S>
MuSolution<S> mu_system_solve(const Vec4<S>& mu, S s, S tol = S(1e-9)) {
  const MuMatrix<S> mm = mu_matrix(mu, tol);
  // (s/6, s/6, s/6) always solves the unconstrained system, so the solution
  // set is that point plus the kernel of the coefficient matrix.
  Eigen::JacobiSVD<Eigen::Matrix<S, 4, 3>> svd(mm.matrix, Eigen::ComputeFullV);
  const int kdim = 3 - mm.rank;
  Eigen::Matrix<S, 3, Eigen::Dynamic> kernel(3, kdim);
  for (int k = 0; k < kdim; ++k) kernel.col(k) = svd.matrixV().col(mm.rank + k);

  const Vec3<S> p0 = Vec3<S>::Constant(s / S(6));
  const S target = -s / S(2);
  const S feas_tol = tol * std::max(S(1), std::abs(s));

  MuSolution<S> out;
  out.rank = mm.rank;
  out.dim = 0;
  out.dirs = {Vec3<S>::Zero(), Vec3<S>::Zero()};

  const auto infeasible = [] {
    return std::domain_error("curv4: mu system has no trace-free solution at this tolerance");
  };

  if (kdim == 0) {
    if (std::abs(target) > feas_tol) throw infeasible();
    out.point = p0;
    return out;
  }

  const Eigen::Matrix<S, Eigen::Dynamic, 1> w = kernel.transpose() * Vec3<S>::Ones();
  Vec3<S> base;
  Eigen::Matrix<S, 3, Eigen::Dynamic> dirs(3, 0);
  if (w.norm() <= tol * S(2)) {
    // the whole kernel keeps the trace; feasible only for s ~ 0
    if (std::abs(target) > feas_tol) throw infeasible();
    base = p0;
    dirs = kernel;
  } else {
    const Eigen::Matrix<S, Eigen::Dynamic, 1> t0 = (target / w.squaredNorm()) * w;
    base = p0 + kernel * t0;
    if (kdim > 1) {
      // directions: kernel vectors that also keep the trace
      Eigen::JacobiSVD<Eigen::Matrix<S, 1, Eigen::Dynamic>> wsvd(w.transpose(),
                                                                 Eigen::ComputeFullV);
      dirs.resize(3, kdim - 1);
      for (int k = 0; k + 1 < kdim; ++k) dirs.col(k) = kernel * wsvd.matrixV().col(k + 1);
    }
  }
  out.dim = static_cast<int>(dirs.cols());
  out.point = base;
  for (int k = 0; k < out.dim && k < 2; ++k) {
    out.dirs[k] = dirs.col(k);
    out.point -= out.dirs[k] * out.dirs[k].dot(base);
  }
  return out;
}

template <typename S>
struct AdaptedFrame {
  Frame<S> frame;
  std::string case_tag;  // multiplicity case the search went through
  S residual;            // relative max off-diagonal of e and both Weyl blocks
};

namespace detail {

template <typename S>
Frame<S> rotated_pair(const Frame<S>& f, int a, int b, S angle) {
  Mat4<S> g = Mat4<S>::Identity();
  const S c = std::cos(angle);
  const S s = std::sin(angle);
  g(a, a) = c;
  g(b, b) = c;
  g(b, a) = s;
  g(a, b) = -s;
  return Frame<S>::from_matrix(f.matrix() * g);
}

// Column permutation with a sign flip on the last column when needed to keep
// the orientation positive.
template <typename S>
Frame<S> permuted_columns(const Frame<S>& f, const std::array<int, 4>& perm) {
  Mat4<S> m;
  for (int k = 0; k < 4; ++k) m.col(k) = f.matrix().col(perm[k]);
  if (m.determinant() < S(0)) m.col(3) *= S(-1);
  return Frame<S>::from_matrix(m);
}

// Angle that diagonalizes [[p, off], [off, q]] by a rotation of the basis.
template <typename S>
S jacobi_angle(S p, S off, S q, S tiny) {
  if (std::abs(off) <= tiny) return S(0);
  return S(0.5) * std::atan2(S(2) * off, p - q);
}

template <typename S>
S frame_residual(const CurvTensor<S>& r, const Sym2<S>& e, const Frame<S>& f) {
  const Mat4<S> ef = f.matrix().transpose() * e.matrix() * f.matrix();
  S off = S(0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) off = std::max(off, std::abs(ef(i, j)));
  const WeylBlocks<S> b = w_pm_blocks(r, f);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) off = std::max(off, std::max(std::abs(b.plus(i, j)), std::abs(b.minus(i, j))));
  return off / scale_of(r);
}

// Rotation freedoms by multiplicity case:
//  - 1111: the eigenframe itself works.
//  - 211: one planar rotation of the double eigenspace; the frame pair
//    (k, k+1) moves the self-dual block pair (1,2) for k = 0 or 2 and the
//    pair (0,1) for k = 1, always by the same angle, and the closed-form
//    angle that diagonalizes the self-dual 2x2 kills both blocks at once.
//  - 31: one SO(3) rotation of the triple eigenspace, applied with the
//    simple eigenvector moved into the first slot; the blocks are +-B there,
//    so the eigenvector basis of B diagonalizes both.
//  - 22: independent planar rotations of the two double eigenspaces; the
//    block pairs (1,2) rotate by the sum and difference of the two angles.
template <typename S>
AdaptedFrame<S> adapt(const CurvTensor<S>& r, const SpectralData<S>& sd) {
  const Sym2<S> e = einstein(r);
  const S thr = sd.cluster_tol * std::max(S(1), e.norm());
  const std::vector<int> sizes = cluster_sizes(sd.mu, thr);
  const S tiny = S(1e-15) * scale_of(r);

  AdaptedFrame<S> out;
  out.case_tag = multiplicity_string(sizes);
  Frame<S> f = sd.frame;

  if (out.case_tag == "211") {
    int d = 0;
    for (int k = 0, pos = 0; k < static_cast<int>(sizes.size()); pos += sizes[k], ++k)
      if (sizes[k] == 2) d = pos;
    const int a = (d == 1) ? 0 : 1;
    const int b = a + 1;
    const WeylBlocks<S> blocks = w_pm_blocks(r, f);
    const S angle =
        jacobi_angle(blocks.plus(a, a), blocks.plus(a, b), blocks.plus(b, b), tiny);
    f = rotated_pair(f, d, d + 1, angle);
  } else if (out.case_tag == "31") {
    const bool simple_first = sizes.front() == 1;
    Frame<S> work = simple_first ? f : permuted_columns(f, {3, 0, 1, 2});
    const WeylBlocks<S> blocks = w_pm_blocks(r, work);
    const auto eig = sym_eigen(blocks.plus);
    Mat4<S> ext = Mat4<S>::Identity();
    ext.template block<3, 3>(1, 1) = eig.vectors;
    work = Frame<S>::from_matrix(work.matrix() * ext);
    f = simple_first ? work : permuted_columns(work, {1, 2, 3, 0});
  } else if (out.case_tag == "22") {
    const WeylBlocks<S> blocks = w_pm_blocks(r, f);
    const S tp = jacobi_angle(blocks.plus(1, 1), blocks.plus(1, 2), blocks.plus(2, 2), tiny);
    const S tm =
        jacobi_angle(blocks.minus(1, 1), blocks.minus(1, 2), blocks.minus(2, 2), tiny);
    f = rotated_pair(f, 0, 1, (tp - tm) / S(2));
    f = rotated_pair(f, 2, 3, (tp + tm) / S(2));
  }
  // "1111" and "4" need no rotation

  out.frame = f;
  out.residual = frame_residual(r, e, f);
  return out;
}

}  // namespace detail

/// Positive orthonormal frame that diagonalizes the Einstein tensor and both
/// Weyl blocks of a weakly Einstein tensor with e != 0.
template <typename S>
AdaptedFrame<S> adapted_frame(const CurvTensor<S>& r, S tol = S(1e-9)) {
  const auto we = is_weakly_einstein(r, tol);
  if (!we.weakly_einstein)
    throw std::invalid_argument("curv4: adapted_frame needs a weakly Einstein tensor");
  if (einstein(r).norm() <= tol * scale_of(r))
    throw std::invalid_argument("curv4: adapted_frame needs a nonzero Einstein tensor");
  AdaptedFrame<S> af = detail::adapt(r, einstein_spectrum(r));
  if (!(af.residual <= tol))
    throw std::runtime_error("curv4: adapted-frame residual above tolerance");
  return af;
}

template <typename S>
struct Classification {
  Family verdict = Family::NotWeaklyEinstein;
  S s = S(0);
  S lambda = S(0);
  S mu_small = S(0);
  S xi = S(0);
  Vec3<S> c = Vec3<S>::Zero();
  Vec4<S> mu = Vec4<S>::Zero();
  Frame<S> frame;
  std::string multiplicity;
  S residual = S(0);  // relative; <= tol whenever the verdict is positive
};

/// Full inverse problem: family tag, parameters, and an adapted frame in
/// which the matching constructor reproduces the input. The reconstruction
/// defect is folded into the residual, and any verdict other than
/// NotWeaklyEinstein guarantees residual <= tol.
template <typename S>
Classification<S> classify(const CurvTensor<S>& r, S tol = S(1e-9), S cluster_tol = S(1e-7)) {
  const S scale = scale_of(r);
  Classification<S> out;
  out.s = scalar(r);

  const auto we = is_weakly_einstein(r, tol);
  out.residual = we.residual;
  if (!we.weakly_einstein) return out;

  const SpectralData<S> sd = einstein_spectrum(r, cluster_tol);
  out.multiplicity = sd.multiplicity;
  out.mu = sd.mu;
  const Sym2<S> e = einstein(r);

  const auto fold = [&out](S v) { out.residual = std::max(out.residual, v); };

  try {
    CurvTensor<S> recon;
    if (e.norm() <= tol * scale || sd.multiplicity == "4") {
      out.verdict = Family::Einstein;
      const WeylBlocks<S> blocks = w_pm_blocks(r, Frame<S>::identity());
      const auto egp = sym_eigen(blocks.plus);
      const auto egm = sym_eigen(blocks.minus);
      out.frame = so4_from_pair(
          QuatPair<S>(unit_from_so3(egp.vectors), unit_from_so3(egm.vectors)));
      fold(e.norm() / scale);
      const Vec3<S> wp = egp.values - Vec3<S>::Constant(egp.values.sum() / S(3));
      const Vec3<S> wm = egm.values - Vec3<S>::Constant(egm.values.sum() / S(3));
      recon = singer_thorpe<S>(out.frame, out.s, Vec4<S>::Zero(), wp, wm);
    } else {
      const AdaptedFrame<S> af = detail::adapt(r, sd);
      out.frame = af.frame;
      fold(af.residual);

      const CurvTensor<S> w = weyl(r);
      Vec3<S> c(component(w, af.frame, 1, 2, 3, 4), component(w, af.frame, 1, 3, 4, 2),
                component(w, af.frame, 1, 4, 2, 3));
      c -= Vec3<S>::Constant(c.sum() / S(3));
      out.c = c;

      if (sd.multiplicity == "22") {
        out.verdict = Family::Thm3;
        out.lambda = (sd.mu[3] + sd.mu[2] - sd.mu[1] - sd.mu[0]) / S(4);
        out.xi = component(w, af.frame, 1, 3, 1, 3) + out.s / S(12);
        recon = thm3<S>(out.s, out.lambda, out.xi, c, af.frame);
      } else if (std::abs(out.s) > tol * scale) {
        out.verdict = Family::Thm2;
        out.lambda = (sd.mu[3] - sd.mu[0]) / S(2);
        out.mu_small = std::max(S(0), (sd.mu[2] - sd.mu[1]) / S(2));
        recon = thm2<S>(out.s, out.lambda, out.mu_small, c, af.frame);
      } else {
        out.verdict = Family::Thm1;
        const Vec4<S> mu = sd.mu - Vec4<S>::Constant(sd.mu.sum() / S(4));
        recon = thm1<S>(mu, c, af.frame);
      }
    }
    fold((recon - r).norm() / scale);
  } catch (const std::exception&) {
    out.verdict = Family::NotWeaklyEinstein;
    fold(S(1));
    return out;
  }

  if (!(out.residual <= tol)) out.verdict = Family::NotWeaklyEinstein;
  return out;
}

}  // namespace curv4
