// Copyright 2026 The GuDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GUDA_VEC2_H_
#define GUDA_VEC2_H_

#include <cmath>
#include <numbers>

namespace guda {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr bool operator==(const Vec2&) const = default;

  double Norm() const { return std::hypot(x, y); }
  constexpr double Dot(Vec2 o) const { return x * o.x + y * o.y; }
  constexpr double Cross(Vec2 o) const { return x * o.y - y * o.x; }
  double Angle() const { return std::atan2(y, x); }
  bool IsFinite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline constexpr double kPi = std::numbers::pi;

// Wraps an angle to (-pi, pi].
inline double WrapAngle(double theta) {
  double wrapped = std::remainder(theta, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

// Counter-clockwise rotation by phi.
inline Vec2 RotateVec(Vec2 v, double cos_phi, double sin_phi) {
  return {cos_phi * v.x - sin_phi * v.y, sin_phi * v.x + cos_phi * v.y};
}

// Householder reflection of a direction vector across a line with unit
// direction `axis`: v' = 2 (v . u) u - v.
inline Vec2 ReflectVec(Vec2 v, Vec2 axis) {
  double d = v.Dot(axis);
  return {2.0 * d * axis.x - v.x, 2.0 * d * axis.y - v.y};
}

// Smallest absolute angular difference between two angles.
inline double AngleBetween(double a, double b) {
  return std::fabs(WrapAngle(a - b));
}

}  // namespace guda

#endif  // GUDA_VEC2_H_
