#pragma once

#include <vector>

#include "curvature/random.hpp"
#include "curvature/tensor.hpp"

namespace curv {

/// Exact Gaussian elimination. Throws kInvalidArgument when a is singular.
template <typename T>
std::vector<T> solve_exact(Matrix<T> a, std::vector<T> b);

template <typename T>
int rank_exact(Matrix<T> a);

/// Seeded random orthogonal matrix. Exact fields: a product of rational
/// Householder reflections I - 2 v v^T / (v^T v) with small integer v.
/// f64: Gram-Schmidt on Gaussian samples.
template <typename T>
Matrix<T> random_orthogonal(int n, Rng& rng);

/// Block-diagonal orthogonal matrix diag(Q1, Q2) with Q1 of size d1.
template <typename T>
Matrix<T> random_block_orthogonal(int d1, int d2, Rng& rng);

/// Residual max |Q^T Q - I|.
template <typename T>
double orthogonality_defect(const Matrix<T>& q);

double min_eigenvalue(const Matrix<double>& symmetric);
std::vector<double> eigenvalues(const Matrix<double>& symmetric);

template <typename T>
Matrix<double> to_double(const Matrix<T>& m);

}  // namespace curv
