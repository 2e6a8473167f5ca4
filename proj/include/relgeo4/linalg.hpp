#pragma once

// Fixed-size vector/matrix helpers shared by the double and jet code paths.
// Everything is templated on the scalar so that the same formulas produce
// values or full Taylor jets.

#include <array>
#include <cmath>
#include <cstddef>

namespace relgeo4 {

template <class T>
using Vec4 = std::array<T, 4>;

template <class T>
using Mat3 = std::array<std::array<T, 3>, 3>;

template <class T>
T dot(const Vec4<T>& a, const Vec4<T>& b) {
  T s = a[0] * b[0];
  for (std::size_t k = 1; k < 4; ++k) s = s + a[k] * b[k];
  return s;
}

template <class T, class S>
Vec4<T> scaled(const Vec4<T>& v, const S& s) {
  return {v[0] * s, v[1] * s, v[2] * s, v[3] * s};
}

template <class T>
Vec4<T> operator+(const Vec4<T>& a, const Vec4<T>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

template <class T>
Vec4<T> operator-(const Vec4<T>& a, const Vec4<T>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

inline double norm(const Vec4<double>& v) { return std::sqrt(dot(v, v)); }

template <class T>
T det3(const T& a00, const T& a01, const T& a02, const T& a10, const T& a11, const T& a12,
       const T& a20, const T& a21, const T& a22) {
  return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) + a02 * (a10 * a21 - a11 * a20);
}

template <class T>
T det(const Mat3<T>& m) {
  return det3(m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2]);
}

template <class T>
T trace(const Mat3<T>& m) {
  return m[0][0] + m[1][1] + m[2][2];
}

/// Adjugate (transposed cofactor matrix); m * adjugate(m) = det(m) I.
template <class T>
Mat3<T> adjugate(const Mat3<T>& m) {
  Mat3<T> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      out[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    }
  return out;
}

/// Inverse via the adjugate. The caller guards against singular input.
template <class T>
Mat3<T> inverse(const Mat3<T>& m) {
  const T d = det(m);
  Mat3<T> adj = adjugate(m);
  for (auto& row : adj)
    for (auto& e : row) e = e / d;
  return adj;
}

inline Mat3<double> multiply(const Mat3<double>& a, const Mat3<double>& b) {
  Mat3<double> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline Mat3<double> identity3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

inline double max_abs_diff(const Mat3<double>& a, const Mat3<double>& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::fmax(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

/// Generalized cross product in R^4: <cross4(v1, v2, v3), w> = det[v1 v2 v3 w]
/// with the arguments as matrix columns. Degenerate input gives the zero vector.
template <class T>
Vec4<T> cross4(const Vec4<T>& v1, const Vec4<T>& v2, const Vec4<T>& v3) {
  Vec4<T> out;
  for (int k = 0; k < 4; ++k) {
    int r[3];
    for (int i = 0, n = 0; i < 4; ++i)
      if (i != k) r[n++] = i;
    T minor = det3(v1[r[0]], v2[r[0]], v3[r[0]], v1[r[1]], v2[r[1]], v3[r[1]], v1[r[2]], v2[r[2]],
                   v3[r[2]]);
    // Cofactor sign for row k, column 4.
    out[k] = (k % 2 == 0) ? -minor : minor;
  }
  return out;
}

}  // namespace relgeo4
