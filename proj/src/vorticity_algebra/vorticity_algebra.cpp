#include <cmath>
#include <stdexcept>

#include "vvlab/vorticity_algebra.hpp"

namespace vvlab::algebra {
namespace {

void check(const VelocityGradientSample& s) {
  if (s.d != 2 && s.d != 3) throw std::invalid_argument("velocity gradient: dimension must be 2 or 3");
  for (int i = 0; i < s.d; ++i)
    for (int j = 0; j < s.d; ++j)
      if (!std::isfinite(s.matrix[i][j])) throw std::invalid_argument("velocity gradient: non-finite entry");
}

}  // namespace

VelocityGradientSample VelocityGradientSample::two_d(double m00, double m01, double m10, double m11) {
  VelocityGradientSample s;
  s.d = 2;
  s.matrix[0][0] = m00;
  s.matrix[0][1] = m01;
  s.matrix[1][0] = m10;
  s.matrix[1][1] = m11;
  return s;
}

VelocityGradientSample VelocityGradientSample::three_d(const Matrix3& m) {
  VelocityGradientSample s;
  s.d = 3;
  s.matrix = m;
  return s;
}

Matrix3 antisym_part(const VelocityGradientSample& sample) {
  check(sample);
  Matrix3 out{};
  for (int i = 0; i < sample.d; ++i)
    for (int j = 0; j < sample.d; ++j) out[i][j] = (sample.matrix[i][j] - sample.matrix[j][i]) / 2.0;
  return out;
}

double scalar_curl_2d(const VelocityGradientSample& sample) {
  check(sample);
  if (sample.d != 2) throw std::invalid_argument("scalar_curl_2d: sample must be two-dimensional");
  return sample.matrix[1][0] - sample.matrix[0][1];
}

ThreeVector curl_3d(const VelocityGradientSample& sample) {
  check(sample);
  if (sample.d != 3) throw std::invalid_argument("curl_3d: sample must be three-dimensional");
  const auto& m = sample.matrix;
  return {m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1]};
}

Matrix3 f_map(const ThreeVector& phi) {
  return {{{0.0, -phi[2], phi[1]}, {phi[2], 0.0, -phi[0]}, {-phi[1], phi[0], 0.0}}};
}

ThreeVector f_inv(const Matrix3& m) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(m[i][j] + m[j][i]) > 1e-12) throw std::invalid_argument("f_inv: matrix is not antisymmetric");
  return {m[2][1], m[0][2], m[1][0]};
}

double frobenius(const Matrix3& a, const Matrix3& b) {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) sum += a[i][j] * b[i][j];
  return sum;
}

ThreeVector apply(const Matrix3& m, const ThreeVector& v) {
  ThreeVector out{};
  for (int i = 0; i < 3; ++i) out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return out;
}

ThreeVector cross(const ThreeVector& a, const ThreeVector& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const ThreeVector& a, const ThreeVector& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace vvlab::algebra
