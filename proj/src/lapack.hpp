#pragma once

// Thin QR/SVD kernels on row-major matrices backed by LAPACK. Internal.

#include <vector>

#include "linalg.hpp"

namespace fttc::linalg {

/// a = l * q with orthonormal rows in q; rho = min(rows, cols).
void lq_rows(const Mat& a, Mat& l, Mat& q);

/// a = u * diag(s) * vh, thin; s in decreasing order.
void svd_thin(const Mat& a, Mat& u, std::vector<double>& s, Mat& vh);

}  // namespace fttc::linalg
