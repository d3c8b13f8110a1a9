// SPDX-License-Identifier: Apache-2.0
//
// cranhp - hybrid precoding simulator for C-RAN massive MIMO with capacity-limited fronthauls
// Copyright (C) 2026 The cranhp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CRANHP_NUMERICS_HPP
#define CRANHP_NUMERICS_HPP

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cranhp
{

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Thrown by numerics routines when a matrix is outside the accepted domain
// (non-square, non-finite, indefinite, singular).
class NumericError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct HermitianEigen
{
    RVector values;  // descending
    CMatrix vectors; // column i pairs with values(i)
};

// Eigendecomposition of a Hermitian matrix. The input is symmetrized as (A+A^H)/2.
// Every eigenvector is rotated so that its first entry of largest modulus is real
// and nonnegative, which makes the basis reproducible across runs.
HermitianEigen hermitian_eig(const CMatrix &A);

// Hermitian PSD square root. Eigenvalues down to -1e-9*||A||_2 are clamped to zero;
// anything below -1e-6*||A||_2 is rejected.
CMatrix psd_sqrt(const CMatrix &A);

CMatrix block_diag(std::span<const CMatrix> blocks);

// Solves A x = b. Throws NumericError when A is singular to working precision.
CVector linear_solve(const CMatrix &A, const CVector &b);
RVector linear_solve(const RMatrix &A, const RVector &b);

// ||A - B||_F / ||B||_F (absolute difference when B is zero).
double relative_frobenius_error(const CMatrix &A, const CMatrix &B);

// Frobenius distance between the orthogonal projectors onto span(U) and span(V).
// Both inputs must have orthonormal columns.
double projector_distance(const CMatrix &U, const CMatrix &V);

bool all_finite(const CMatrix &A);

} // namespace cranhp

#endif
