#pragma once

#include <array>

namespace vvlab::algebra {

using ThreeVector = std::array<double, 3>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

// Velocity gradient with (grad u)^{ij} = d_j u^i: row i is the component,
// column j the derivative direction. Only the leading d x d block is used.
struct VelocityGradientSample {
  int d = 3;
  Matrix3 matrix{};

  static VelocityGradientSample two_d(double m00, double m01, double m10, double m11);
  static VelocityGradientSample three_d(const Matrix3& m);
};

// (M - M^T)/2 on the leading d x d block; other entries zero.
Matrix3 antisym_part(const VelocityGradientSample& sample);
// d_1 u^2 - d_2 u^1 = M[1][0] - M[0][1]
double scalar_curl_2d(const VelocityGradientSample& sample);
// (d_2 u^3 - d_3 u^2, d_3 u^1 - d_1 u^3, d_1 u^2 - d_2 u^1)
ThreeVector curl_3d(const VelocityGradientSample& sample);

Matrix3 f_map(const ThreeVector& phi);
// Throws std::invalid_argument if m deviates from antisymmetry by more than 1e-12.
ThreeVector f_inv(const Matrix3& m);

// Frobenius pairing sum_ij A_ij B_ij.
double frobenius(const Matrix3& a, const Matrix3& b);
ThreeVector apply(const Matrix3& m, const ThreeVector& v);
ThreeVector cross(const ThreeVector& a, const ThreeVector& b);
double dot(const ThreeVector& a, const ThreeVector& b);

}  // namespace vvlab::algebra
