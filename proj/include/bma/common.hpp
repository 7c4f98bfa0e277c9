#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace bma {

/// Error taxonomy shared across modules; the CLI maps kinds to exit codes.
enum class ErrorKind {
  Config,
  Domain,
  BranchCollision,
  StencilDegenerate,
  BarrierFailure,
  Diverged,
  Threshold,
  Range,
  UnsupportedDimension,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
  Vec2 normalized() const { double n = norm(); return {x / n, y / n}; }
  Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// 2x2 matrix, row-major; enough for deck transformations.
struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;  // [[a,b],[c,d]]

  static Mat2 identity() { return {}; }
  static Mat2 shear_x(double lambda) { return {1, lambda, 0, 1}; }
  static Mat2 rotation(double t) {
    double co = std::cos(t), si = std::sin(t);
    return {co, -si, si, co};
  }

  Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 mul(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }
  double det() const { return a * d - b * c; }
  Mat2 inverse() const {
    double dt = det();
    return {d / dt, -b / dt, -c / dt, a / dt};
  }
  /// Integer power (negative allowed).
  Mat2 pow(int m) const {
    Mat2 base = m >= 0 ? *this : inverse();
    int k = m >= 0 ? m : -m;
    Mat2 r = identity();
    for (int i = 0; i < k; ++i) r = r.mul(base);
    return r;
  }
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace bma
