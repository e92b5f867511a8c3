// Copyright 2026 The csq Authors
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

#pragma once

// Independent reference computations shared by the unit tests. Nothing here
// calls into the library's numerical routines.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;

/// Partial sum of the exponential series.
inline double exp_series(double x, int terms = 60) {
  double sum = 0.0, term = 1.0;
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= x / (k + 1);
  }
  return sum;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// <n|z> for the Glauber state, straight from the Fock sum definition.
inline Complex fock_amplitude(Complex z, int n) {
  return std::exp(-0.5 * std::norm(z)) * std::pow(z, n) / std::sqrt(factorial(n));
}

/// Antinormal moment: integral over d^2z/pi of |z|^2 <m|z><z|n> is delta_mn (n + 1).
inline double antinormal_number_diagonal(int n) { return n + 1.0; }

/// Integral over d^2z/pi of z^k conj(z)^l <m|z><z|n>: Gaussian moments.
inline double antinormal_moment(int k, int l, int m, int n) {
  if (k + m != l + n) return 0.0;
  return factorial(k + m) / std::sqrt(factorial(m) * factorial(n));
}

/// Ladder operator from its matrix elements.
inline Eigen::MatrixXcd lowering(int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// Random Hermitian matrix with entries in [-1, 1].
inline Eigen::MatrixXcd random_hermitian(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = Complex(u(rng), u(rng));
  return (a + a.adjoint()) / 2.0;
}

/// Random density matrix A A^dag / Tr, optionally supported on the first `support` levels.
inline Eigen::MatrixXcd random_density(int dim, std::mt19937_64& rng, int support = -1) {
  if (support < 0) support = dim;
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int r = 0; r < support; ++r)
    for (int c = 0; c < support; ++c) a(r, c) = Complex(g(rng), g(rng));
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

/// Standard Wigner small-d element d^j_{m, j}(theta), by the explicit sum.
inline double wigner_small_d_highest(double j, double m, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const double binom = factorial(static_cast<int>(2 * j)) /
                       (factorial(static_cast<int>(j + m)) * factorial(static_cast<int>(j - m)));
  return std::sqrt(binom) * std::pow(c, j + m) * std::pow(s, j - m);
}

}  // namespace oracle
