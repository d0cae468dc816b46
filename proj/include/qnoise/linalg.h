// Copyright 2026 The QNoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNOISE_LINALG_H
#define QNOISE_LINALG_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace qnoise {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Sized for channel math (up to 16x16) and
/// small dense oracles; not a general-purpose BLAS replacement.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
    /// Row-major nested initializer, e.g. {{1, 0}, {0, 1}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zeros(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<cplx> &entries() const { return data_; }
    std::vector<cplx> &entries() { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix transpose() const;
    cplx trace() const;

    double frobenius_norm() const;
    bool all_finite() const;

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(cplx scale);

    bool operator==(const ComplexMatrix &other) const = default;

    std::string str() const;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix operator*(cplx scale, ComplexMatrix m);

/// Frobenius norm of a - b. Shapes must agree.
double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b);

/// Singular value decomposition m = left * diag(singular_values) * right^H.
struct SvdResult {
    ComplexMatrix left;
    std::vector<double> singular_values;
    ComplexMatrix right;

    ComplexMatrix reconstruct() const;
};

/// Largest dimension accepted by svd().
inline constexpr std::size_t kMaxSvdDimension = 64;

/// One-sided (Hestenes) Jacobi SVD of a square matrix.
///
/// Singular values are sorted descending; values below 1e-12 * sigma_max are
/// clamped to zero and their left vectors completed to an orthonormal basis.
/// Phase convention: the largest-magnitude entry of each left vector is made
/// real and non-negative (first such entry on ties), with the compensating
/// phase applied to the matching right vector.
SvdResult svd(const ComplexMatrix &m);

/// Largest singular value.
double spectral_norm(const ComplexMatrix &m);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

}  // namespace qnoise

#endif
