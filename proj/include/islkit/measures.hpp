#pragma once

#include "islkit/states.hpp"

namespace islkit {

enum class MeasureKind { TraceDistance, RelativeEntropy, Geometric };

// S(rho) = -tr(rho ln rho) in nats; 0*ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

// Trace norm of the imaginary part.
double m_tr(const DensityMatrix& rho);

// S(Re rho) - S(rho), in nats; >= 0.
double m_r(const DensityMatrix& rho);

// (1 - sqrt F(rho, rho^T)) / 2, in [0, 1/2].
double m_g(const DensityMatrix& rho);

// Bures angle to the closest real state: arccos sqrt(1 - m_g), in [0, pi/4].
double imaginarity_angle(const DensityMatrix& rho);

double measure(MeasureKind kind, const DensityMatrix& rho);

const char* measure_name(MeasureKind kind);

} // namespace islkit
