#pragma once

#include <complex>
#include <vector>

#include "qsor/dense.hpp"

namespace qsor {

// Dense nonsymmetric eigenvalues via Householder Hessenberg reduction and
// Francis double-shift QR. Intended for desk-scale diagnostics (iteration
// matrices, convergence checks), not large problems.
std::vector<std::complex<double>> dense_eigenvalues(Matrix a);

// max |lambda| over the spectrum of a.
double spectral_radius_dense(const Matrix& a);

} // namespace qsor
