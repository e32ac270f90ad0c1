#pragma once

#include <vector>

namespace amo {

// Eigenvalues of a dense symmetric n x n matrix (row-major, full storage)
// by cyclic Jacobi rotations. Ascending order. Deterministic; accurate to
// a few ulps of the matrix norm. Intended for small matrices (n <= ~300).
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

}  // namespace amo
