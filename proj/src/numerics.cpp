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

#include "cranhp/numerics.hpp"

#include <cmath>
#include <limits>

namespace cranhp
{

bool all_finite(const CMatrix &A)
{
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            if (!std::isfinite(A(i, j).real()) || !std::isfinite(A(i, j).imag()))
                return false;
    return true;
}

static void require_square_finite(const CMatrix &A, const char *what)
{
    if (A.rows() == 0 || A.rows() != A.cols())
        throw NumericError(std::string(what) + ": matrix must be square and nonempty");
    if (!all_finite(A))
        throw NumericError(std::string(what) + ": matrix has non-finite entries");
}

HermitianEigen hermitian_eig(const CMatrix &A)
{
    require_square_finite(A, "hermitian_eig");

    const CMatrix sym = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NumericError("hermitian_eig: eigensolver did not converge");

    const Eigen::Index n = A.rows();
    HermitianEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);

    // Eigen returns ascending order
    for (Eigen::Index i = 0; i < n; ++i)
    {
        out.values(i) = solver.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }

    for (Eigen::Index j = 0; j < n; ++j)
    {
        auto v = out.vectors.col(j);
        double best = -1.0;
        Eigen::Index pivot = 0;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            // the relative margin keeps the pivot stable against rounding between near-equal moduli
            const double mag = std::abs(v(i));
            if (mag > best * (1.0 + 1e-9) + 1e-300)
            {
                best = mag;
                pivot = i;
            }
        }
        if (best > 0.0)
            v *= std::conj(v(pivot)) / best;
    }
    return out;
}

CMatrix psd_sqrt(const CMatrix &A)
{
    const HermitianEigen eig = hermitian_eig(A);
    const double norm2 = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
    if (norm2 == 0.0)
        return CMatrix::Zero(A.rows(), A.cols());

    RVector roots(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    {
        const double lambda = eig.values(i);
        if (lambda < -1e-6 * norm2)
            throw NumericError("psd_sqrt: matrix is significantly indefinite");
        roots(i) = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
    }
    CMatrix S = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
    return 0.5 * (S + S.adjoint());
}

CMatrix block_diag(std::span<const CMatrix> blocks)
{
    if (blocks.empty())
        throw NumericError("block_diag: empty block list");

    Eigen::Index rows = 0, cols = 0;
    for (const auto &b : blocks)
    {
        rows += b.rows();
        cols += b.cols();
    }
    CMatrix out = CMatrix::Zero(rows, cols);
    Eigen::Index r = 0, c = 0;
    for (const auto &b : blocks)
    {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

template <typename Mat, typename Vec>
static Vec solve_impl(const Mat &A, const Vec &b)
{
    if (A.rows() == 0 || A.rows() != A.cols())
        throw NumericError("linear_solve: matrix must be square and nonempty");
    if (b.size() != A.rows())
        throw NumericError("linear_solve: dimension mismatch");

    Eigen::PartialPivLU<Mat> lu(A);
    const double rcond = lu.rcond();
    if (!(rcond > 16.0 * std::numeric_limits<double>::epsilon()))
        throw NumericError("linear_solve: matrix is singular to working precision");
    return lu.solve(b);
}

CVector linear_solve(const CMatrix &A, const CVector &b) { return solve_impl(A, b); }
RVector linear_solve(const RMatrix &A, const RVector &b) { return solve_impl(A, b); }

double relative_frobenius_error(const CMatrix &A, const CMatrix &B)
{
    const double ref = B.norm();
    const double diff = (A - B).norm();
    return ref > 0.0 ? diff / ref : diff;
}

double projector_distance(const CMatrix &U, const CMatrix &V)
{
    const CMatrix PU = U * U.adjoint();
    const CMatrix PV = V * V.adjoint();
    return (PU - PV).norm();
}

} // namespace cranhp
