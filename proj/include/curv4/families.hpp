#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "curv4/hodge.hpp"
#include "curv4/quaternion.hpp"
#include "curv4/tensor.hpp"
#include "curv4/types.hpp"

namespace curv4 {

namespace detail {

template <typename S>
void check_trace_free(const char* what, S sum, S scale) {
  if (std::abs(sum) > S(1e-12) * std::max(S(1), scale)) {
    throw std::invalid_argument(std::string("curv4: ") + what + " must sum to zero");
  }
}

// Deterministic draws on top of the fully specified mt19937_64 stream; no
// standard-library distributions, so a seed pins the exact byte sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }
  double sign() { return uniform_int(2) == 0 ? -1.0 : 1.0; }

  double normal() {
    const double u1 = std::max(uniform(), 0x1.0p-60);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace detail

/// Curvature tensor with the Einstein tensor diagonalized by F with
/// eigenvalues mu, and the Weyl blocks on the bases of F diagonal with
/// entries wplus / wminus; the scalar curvature is s. All three eigenvalue
/// lists must be trace-free.
template <typename S>
CurvTensor<S> singer_thorpe(const Frame<S>& f, S s, const Vec4<S>& mu, const Vec3<S>& wplus,
                            const Vec3<S>& wminus) {
  detail::check_trace_free("einstein eigenvalues", mu.sum(),
                           mu.template lpNorm<Eigen::Infinity>());
  detail::check_trace_free("self-dual weyl eigenvalues", wplus.sum(),
                           wplus.template lpNorm<Eigen::Infinity>());
  detail::check_trace_free("anti-self-dual weyl eigenvalues", wminus.sum(),
                           wminus.template lpNorm<Eigen::Infinity>());

  const PMBases<S> pm = pm_bases(f);
  Mat6<S> w = Mat6<S>::Zero();
  for (int k = 0; k < 3; ++k) {
    w += (wplus[k] / S(2)) * (pm.plus[k] * pm.plus[k].transpose());
    w += (wminus[k] / S(2)) * (pm.minus[k] * pm.minus[k].transpose());
  }
  const Sym2<S> e(f.matrix() * mu.asDiagonal() * f.matrix().transpose());
  const Sym2<S> g = Sym2<S>::metric();
  return CurvTensor<S>(w) + S(0.5) * kn_product(e, g) + (s / S(24)) * kn_product(g, g);
}

/// Scalar-flat family: Einstein eigenvalues mu (trace-free, otherwise
/// arbitrary), Weyl blocks diag(+-c2, +-c3, +-c4).
template <typename S>
CurvTensor<S> thm1(const Vec4<S>& mu, const Vec3<S>& c, const Frame<S>& f = Frame<S>()) {
  detail::check_trace_free("c", c.sum(), c.template lpNorm<Eigen::Infinity>());
  return singer_thorpe<S>(f, S(0), mu, c, -c);
}

/// Family with Einstein eigenvalues (-lambda, -mu, mu, lambda), lambda > mu
/// >= 0, and Weyl blocks diag(+-c2 - s/12, +-c3 - s/12, +-c4 + s/6).
template <typename S>
CurvTensor<S> thm2(S s, S lambda, S mu_small, const Vec3<S>& c, const Frame<S>& f = Frame<S>()) {
  detail::check_trace_free("c", c.sum(), c.template lpNorm<Eigen::Infinity>());
  if (!(mu_small >= S(0))) throw std::invalid_argument("curv4: thm2 needs mu >= 0");
  if (!(lambda > mu_small))
    throw std::invalid_argument(
        "curv4: thm2 needs lambda > mu; two double eigenvalues belong to thm3");
  const Vec4<S> mu(-lambda, -mu_small, mu_small, lambda);
  const Vec3<S> wp(c[0] - s / S(12), c[1] - s / S(12), c[2] + s / S(6));
  const Vec3<S> wm(-c[0] - s / S(12), -c[1] - s / S(12), -c[2] + s / S(6));
  return singer_thorpe<S>(f, s, mu, wp, wm);
}

/// Family with two double Einstein eigenvalues (-lambda, -lambda, lambda,
/// lambda), lambda > 0, and Weyl blocks
/// diag(+-c2 - s/12, +-c3 + xi - s/12, +-c4 - xi + s/6).
template <typename S>
CurvTensor<S> thm3(S s, S lambda, S xi, const Vec3<S>& c, const Frame<S>& f = Frame<S>()) {
  detail::check_trace_free("c", c.sum(), c.template lpNorm<Eigen::Infinity>());
  if (!(lambda > S(0))) throw std::invalid_argument("curv4: thm3 needs lambda > 0");
  const Vec4<S> mu(-lambda, -lambda, lambda, lambda);
  const Vec3<S> wp(c[0] - s / S(12), c[1] + xi - s / S(12), c[2] - xi + s / S(6));
  const Vec3<S> wm(-c[0] - s / S(12), -c[1] + xi - s / S(12), -c[2] - xi + s / S(6));
  return singer_thorpe<S>(f, s, mu, wp, wm);
}

/// Kaehler-type instance: thm3 with (c2, c3, c4) = (s/4, -xi, xi - s/4), so
/// the self-dual block spectrum is (s/6, -s/12, -s/12).
template <typename S>
CurvTensor<S> kahler_type(S s, S lambda, S xi, const Frame<S>& f = Frame<S>()) {
  if (!(lambda > S(0))) throw std::invalid_argument("curv4: kahler_type needs lambda > 0");
  const Vec3<S> c(s / S(4), -xi, xi - s / S(4));
  return thm3<S>(s, lambda, xi, c, f);
}

/// Homogeneous example: the only nonzero components are
/// R_1212 = R_1313 = R_1414 = R_2323 = -R_2424 = -R_3434 = -lambda/2,
/// giving s = -2 lambda and Einstein spectrum (-lambda, 0, 0, lambda).
template <typename S>
CurvTensor<S> eps(S lambda) {
  if (!(lambda > S(0))) throw std::invalid_argument("curv4: eps needs lambda > 0");
  Mat6<S> a = Mat6<S>::Zero();
  const S half = lambda / S(2);
  a(0, 0) = -half;  // R_1212
  a(1, 1) = -half;  // R_1313
  a(2, 2) = -half;  // R_1414
  a(5, 5) = -half;  // R_2323
  a(4, 4) = half;   // R_2424
  a(3, 3) = half;   // R_3434
  return CurvTensor<S>(a);
}

enum class Family { NotWeaklyEinstein, Einstein, Thm1, Thm2, Thm3 };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::NotWeaklyEinstein: return "NotWeaklyEinstein";
    case Family::Einstein: return "Einstein";
    case Family::Thm1: return "Thm1";
    case Family::Thm2: return "Thm2";
    case Family::Thm3: return "Thm3";
  }
  return "?";
}

template <typename S>
struct FamilyDraw {
  Family family;
  CurvTensor<S> tensor;
};

namespace detail {

template <typename S>
QuatPair<S> random_pair(Rng& rng) {
  const auto draw = [&rng] {
    Quat<S> q{S(rng.normal()), S(rng.normal()), S(rng.normal()), S(rng.normal())};
    return UnitQuaternion<S>(q);
  };
  const auto p = draw();
  return QuatPair<S>(p, draw());
}

template <typename S>
Vec3<S> random_c(Rng& rng) {
  const S z1 = S(rng.uniform(-1.5, 1.5));
  const S z2 = S(rng.uniform(-1.5, 1.5));
  return Vec3<S>(z1, z2, -z1 - z2);
}

// Trace-free Einstein eigenvalues with well-separated clusters, drawn over
// the 1111 / 211 / 31 multiplicity patterns.
template <typename S>
Vec4<S> random_thm1_mu(Rng& rng) {
  const int pattern = rng.uniform_int(3);
  Vec4<S> mu;
  if (pattern == 0) {  // 1111
    S v = S(0);
    for (int k = 0; k < 4; ++k) {
      mu[k] = v;
      v += S(0.25) + S(rng.uniform(0.0, 1.0));
    }
  } else if (pattern == 1) {  // 211, double slot anywhere
    const int dup = rng.uniform_int(3);
    S v = S(0);
    int k = 0;
    for (int slot = 0; slot < 3; ++slot) {
      mu[k++] = v;
      if (slot == dup) mu[k++] = v;
      v += S(0.25) + S(rng.uniform(0.0, 1.0));
    }
  } else {  // 31
    const S m = S(rng.sign()) * S(0.3 + rng.uniform(0.0, 1.2));
    mu = Vec4<S>(m, m, m, -S(3) * m);
    std::sort(mu.data(), mu.data() + 4);
    return mu;
  }
  const S mean = mu.sum() / S(4);
  for (int k = 0; k < 4; ++k) mu[k] -= mean;
  return mu;
}

// One family instance in a random frame; every draw passes the weakly
// Einstein test by construction.
template <typename S>
FamilyDraw<S> draw_weakly_einstein(Rng& rng) {
  const Frame<S> f = so4_from_pair(random_pair<S>(rng));
  const int fam = rng.uniform_int(3);
  if (fam == 0) {
    return {Family::Thm1, thm1<S>(random_thm1_mu<S>(rng), random_c<S>(rng), f)};
  }
  if (fam == 1) {
    const S s = S(rng.sign()) * S(0.3 + rng.uniform(0.0, 2.0));
    const S lambda = S(0.4 + rng.uniform(0.0, 1.6));
    const S mu = rng.uniform_int(3) == 0 ? S(0) : S(lambda * rng.uniform(0.15, 0.85));
    return {Family::Thm2, thm2<S>(s, lambda, mu, random_c<S>(rng), f)};
  }
  const S s = S(rng.uniform(-2.0, 2.0));
  const S lambda = S(0.4 + rng.uniform(0.0, 1.6));
  const S xi = S(rng.uniform(-1.5, 1.5));
  return {Family::Thm3, thm3<S>(s, lambda, xi, random_c<S>(rng), f)};
}

}  // namespace detail

/// Deterministic weakly Einstein sample: family uniform over the three
/// non-Einstein classes, parameters with well-separated spectra, random
/// quaternion-pair frame.
template <typename S>
CurvTensor<S> random_weakly_einstein(std::uint64_t seed) {
  detail::Rng rng(seed);
  return detail::draw_weakly_einstein<S>(rng).tensor;
}

template <typename S>
FamilyDraw<S> random_family_draw(std::uint64_t seed) {
  detail::Rng rng(seed);
  return detail::draw_weakly_einstein<S>(rng);
}

/// Deterministic generic curvature tensor: symmetric uniform(-1,1) entries
/// with the Bianchi trace projected out. Almost never weakly Einstein.
template <typename S>
CurvTensor<S> random_curvature(std::uint64_t seed) {
  detail::Rng rng(seed);
  Mat6<S> a;
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) {
      a(i, j) = S(rng.uniform(-1.0, 1.0));
      a(j, i) = a(i, j);
    }
  const S b = (a(0, 3) + a(1, 4) + a(2, 5)) / S(3);
  for (int k = 0; k < 3; ++k) {
    a(k, k + 3) -= b;
    a(k + 3, k) = a(k, k + 3);
  }
  return CurvTensor<S>(a);
}

}  // namespace curv4
