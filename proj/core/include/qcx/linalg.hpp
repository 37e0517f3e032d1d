#pragma once

#include <array>

#include "qcx/types.hpp"

namespace qcx {

/// Eigenvalues of a symmetric 3x3 matrix in ascending order. Uses the
/// trigonometric closed form, switching to cyclic Jacobi when two
/// eigenvalues nearly coincide (where acos loses half the digits).
std::array<double, 3> eigenvalues(const Sym3& m);

struct Eigen3 {
  std::array<double, 3> values;   // ascending
  std::array<Vec3, 3> vectors;    // unit columns matching values
};

/// Cyclic Jacobi rotations to full convergence.
Eigen3 jacobi_eigen(const Sym3& m);

/// Symmetric 2x2 matrix [[a, b], [b, c]].
struct Sym2 {
  double a = 0, b = 0, c = 0;
  double det() const { return a * c - b * b; }
  double trace() const { return a + c; }
};

struct Eigen2 {
  std::array<double, 2> values;                 // ascending
  std::array<std::array<double, 2>, 2> vectors;  // unit, matching values
};

/// Closed-form eigen-decomposition from trace and determinant.
Eigen2 eigen(const Sym2& m);

}  // namespace qcx
