#pragma once

// Data-parallel inner loops over boundary nodes. Every kernel has an OpenMP
// version and a plain serial reference with the same signature in
// `kernels::serial`; tests hold the two against each other.
//
// The OpenMP versions reduce over fixed-size row chunks and combine the
// partial results in chunk order, so their output does not depend on the
// thread count.

#include <span>

#include <Eigen/Dense>

#include "extremal/geometry.hpp"

namespace extremal::kernels {

inline constexpr int kChunk = 128;

/// V(i, k) = F_k(points[i]), k = 0..n.
Eigen::MatrixXcd faber_basis(const ExteriorMap& map, std::span<const cplx> points, int n);

/// V(i, k) = points[i]^k.
Eigen::MatrixXcd monomial_basis(std::span<const cplx> points, int n);

/// G = V^* diag(w) V.
Eigen::MatrixXcd weighted_gram(const Eigen::MatrixXcd& V, std::span<const double> w);

/// sum_i w_i |values_i|^r.
double weighted_power_sum(const Eigen::VectorXcd& values, std::span<const double> w, double r);

/// sum_i w_i log(max(f_i, floor)).
double weighted_log_sum(std::span<const double> w, std::span<const double> f, double floor);

/// max_i rho_i |values_i| and its index.
std::pair<double, int> max_weighted_abs(const Eigen::VectorXcd& values, std::span<const double> rho);

namespace serial {

Eigen::MatrixXcd faber_basis(const ExteriorMap& map, std::span<const cplx> points, int n);
Eigen::MatrixXcd monomial_basis(std::span<const cplx> points, int n);
Eigen::MatrixXcd weighted_gram(const Eigen::MatrixXcd& V, std::span<const double> w);
double weighted_power_sum(const Eigen::VectorXcd& values, std::span<const double> w, double r);
double weighted_log_sum(std::span<const double> w, std::span<const double> f, double floor);
std::pair<double, int> max_weighted_abs(const Eigen::VectorXcd& values, std::span<const double> rho);

}  // namespace serial

}  // namespace extremal::kernels
