#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>

namespace softbar {

using Real = double;
using Vec2 = Eigen::Matrix<Real, 2, 1>;
using Vec3 = Eigen::Matrix<Real, 3, 1>;
using Vec5 = Eigen::Matrix<Real, 5, 1>;
using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Mat2 = Eigen::Matrix<Real, 2, 2>;
using MatX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;

/// 90-degree counterclockwise rotation of a plane vector.
inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

inline Vec2 unit_from_angle(Real a) { return Vec2(std::cos(a), std::sin(a)); }

inline Mat2 rotation(Real a) {
  const Real c = std::cos(a), s = std::sin(a);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

/// Wraps an angle to [-pi, pi].
inline Real wrap_to_pi(Real a) { return std::remainder(a, 2.0 * kPi); }

inline Real cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Signed turning angle from direction u to direction w, in (-pi, pi].
inline Real turn_angle(const Vec2& u, const Vec2& w) {
  return std::atan2(cross2(u, w), u.dot(w));
}

/// splitmix64; used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  return splitmix64(s);
}

/// Deterministic random stream. Keeps all draw algorithms in-repo so that
/// sequences are reproducible bit-for-bit across builds of this project.
class RandomStream {
 public:
  RandomStream() : RandomStream(0) {}
  explicit RandomStream(std::uint64_t seed) : state_(seed ? seed : 1) {
    // warm up so nearby seeds decorrelate
    for (int i = 0; i < 4; ++i) next_u64();
  }

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    state_ = x;
    return x * 0x2545f4914f6cdd1dULL;
  }

  /// Uniform in [0, 1).
  Real uniform() {
    return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  int uniform_int(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  /// Standard normal via Box-Muller. Uses two uniforms per draw, no cached
  /// second value, so the stream state fully determines the sequence.
  Real gaussian() {
    Real u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const Real u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  bool operator==(const RandomStream& other) const = default;

 private:
  std::uint64_t state_;
};

}  // namespace softbar
