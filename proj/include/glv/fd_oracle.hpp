// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "glv/landau.hpp"

namespace glv {

/// Independent discretization of -Delta_{a^n} on gauge-periodic functions:
/// symmetrized covariant differences with Peierls link phases on an N x N grid
/// of one cell (9-point stencil in the oblique cell coordinates).
Eigen::SparseMatrix<cplx> fd_magnetic_laplacian(const MagneticCell& cell, int N);

/// Lowest `count` eigenvalues of the FD operator (shift-invert subspace
/// iteration; deterministic).
Eigen::VectorXd fd_landau_eigenvalues(const MagneticCell& cell, int N, int count);

/// h^2- and h^4-eliminating Richardson fit over several grids.
Eigen::VectorXd fd_landau_eigenvalues_richardson(const MagneticCell& cell,
                                                 const std::vector<int>& grids, int count);

/// Sample a wave function on the FD grid (nodes x = (i g1 + j g2)/N).
Eigen::VectorXcd fd_sample(const MagneticCell& cell, int N,
                           const std::function<cplx(cplx)>& psi);

}  // namespace glv
