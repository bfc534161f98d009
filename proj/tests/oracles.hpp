#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace oracle {

inline double power_iteration(const Eigen::MatrixXd& a, int iters = 20000) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.rows()).normalized();
  double lambda = 0;
  for (int i = 0; i < iters; ++i) {
    Eigen::VectorXd w = a * v;
    const double next = v.dot(w);
    v = w.normalized();
    if (i > 10 && std::abs(next - lambda) <= 1e-15 * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

// Smallest eigenvalue of an SPD matrix by inverse iteration on an LU factorization.
inline double inverse_iteration(const Eigen::MatrixXd& a, int iters = 20000) {
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.rows()).normalized();
  double mu = 0;
  for (int i = 0; i < iters; ++i) {
    Eigen::VectorXd w = lu.solve(v);
    const double next = v.dot(w);
    v = w.normalized();
    if (i > 10 && std::abs(next - mu) <= 1e-15 * std::abs(next)) return 1.0 / next;
    mu = next;
  }
  return 1.0 / mu;
}

inline Eigen::MatrixXd random_spd(int n, std::mt19937_64& gen, double shift = 0.5) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(gen);
  Eigen::MatrixXd a = g * g.transpose() / n;
  a.diagonal().array() += shift;
  return 0.5 * (a + a.transpose());
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(gen);
  return 0.5 * (g + g.transpose());
}

inline Eigen::MatrixXd random_psd(int n, int rank, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = normal(gen);
  Eigen::MatrixXd a = g * g.transpose();
  return 0.5 * (a + a.transpose());
}

}  // namespace oracle
