#pragma once

#include "islkit/dynamics.hpp"
#include "islkit/states.hpp"

namespace islkit {

// Column-stacking vectorization: component (j*d + i) of vec(X) is <i|X|j>,
// so vec(A X B) = (B^T (x) A) vec(X).
Eigen::VectorXcd vec(const matfun::Matrix& x);
matfun::Matrix devec(const Eigen::VectorXcd& v, int dim);

struct VectorizedState {
    int dim = 0;
    Eigen::VectorXcd vector; // vec(rho)
    double norm = 0.0;       // sqrt(tr rho^2)
};

VectorizedState vectorize(const DensityMatrix& rho);

// d^2 x d^2 matrix L with L vec(rho) = vec(generator action on rho).
matfun::Matrix superoperator_matrix(const Generator& g, double t);

// Fluctuation of the generator on the normalized vectorized state:
// sqrt( (r~|L^dag L|r~) - |(r~|L|r~)|^2 ), clamped at zero from below.
double liouvillian_fluctuation(const Generator& g, double t, const DensityMatrix& rho);

// Largest singular value of the superoperator (Hermitian path via L^dag L).
double superop_norm(const Generator& g, double t);

// arccos( tr(rho sigma) / sqrt(tr rho^2 tr sigma^2) ), clamped to [0, pi].
double liouville_angle(const DensityMatrix& rho, const DensityMatrix& sigma);

} // namespace islkit
