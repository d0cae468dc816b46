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

#include "qnoise/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qnoise/errors.h"

namespace qnoise {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw ValidationError(
            "ComplexMatrix: " + std::to_string(data_.size()) + " entries for a " + std::to_string(rows_) + "x" +
            std::to_string(cols_) + " matrix");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &row : rows) {
        if (row.size() != cols_) {
            throw ValidationError("ComplexMatrix: ragged initializer");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t k = 0; k < n; k++) {
        m(k, k) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out = *this;
    for (auto &v : out.data_) {
        v = std::conj(v);
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0;
    for (std::size_t k = 0; k < std::min(rows_, cols_); k++) {
        t += (*this)(k, k);
    }
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0;
    for (const auto &v : data_) {
        s += std::norm(v);
    }
    return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx &v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw ValidationError("ComplexMatrix: shape mismatch in +");
    }
    for (std::size_t k = 0; k < data_.size(); k++) {
        data_[k] += other.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw ValidationError("ComplexMatrix: shape mismatch in -");
    }
    for (std::size_t k = 0; k < data_.size(); k++) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(cplx scale) {
    for (auto &v : data_) {
        v *= scale;
    }
    return *this;
}

std::string ComplexMatrix::str() const {
    std::ostringstream out;
    out.precision(6);
    out << "[";
    for (std::size_t r = 0; r < rows_; r++) {
        out << (r == 0 ? "[" : " [");
        for (std::size_t c = 0; c < cols_; c++) {
            const cplx v = (*this)(r, c);
            out << (c == 0 ? "" : ", ") << v.real();
            if (v.imag() != 0) {
                out << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
            }
        }
        out << "]" << (r + 1 == rows_ ? "" : "\n");
    }
    out << "]";
    return out.str();
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
    a -= b;
    return a;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw ValidationError("ComplexMatrix: shape mismatch in *");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (std::size_t k = 0; k < a.cols(); k++) {
            const cplx v = a(r, k);
            if (v == cplx(0)) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); c++) {
                out(r, c) += v * b(k, c);
            }
        }
    }
    return out;
}

ComplexMatrix operator*(cplx scale, ComplexMatrix m) {
    m *= scale;
    return m;
}

double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (a - b).frobenius_norm();
}

ComplexMatrix SvdResult::reconstruct() const {
    ComplexMatrix scaled = left;
    for (std::size_t r = 0; r < scaled.rows(); r++) {
        for (std::size_t c = 0; c < scaled.cols(); c++) {
            scaled(r, c) *= singular_values[c];
        }
    }
    return scaled * right.adjoint();
}

namespace {

void require_finite(const ComplexMatrix &m, const char *who) {
    if (!m.all_finite()) {
        throw ValidationError(std::string(who) + ": matrix has non-finite entries");
    }
}

double column_norm2(const ComplexMatrix &m, std::size_t c) {
    double s = 0;
    for (std::size_t r = 0; r < m.rows(); r++) {
        s += std::norm(m(r, c));
    }
    return s;
}

cplx column_dot(const ComplexMatrix &m, std::size_t p, std::size_t q) {
    cplx s = 0;
    for (std::size_t r = 0; r < m.rows(); r++) {
        s += std::conj(m(r, p)) * m(r, q);
    }
    return s;
}

// Rotates columns (p, q) by [[c, s], [-s, c]] after dephasing column q by
// conj(phase): a_p' = c a_p - s e^{-i phi} a_q, a_q' = s a_p + c e^{-i phi} a_q.
void rotate_columns(ComplexMatrix &m, std::size_t p, std::size_t q, double c, double s, cplx phase) {
    const cplx dephase = std::conj(phase);
    for (std::size_t r = 0; r < m.rows(); r++) {
        const cplx ap = m(r, p);
        const cplx aq = m(r, q) * dephase;
        m(r, p) = c * ap - s * aq;
        m(r, q) = s * ap + c * aq;
    }
}

cplx normalize_column_phase(ComplexMatrix &left, std::size_t column) {
    double best = 0;
    for (std::size_t r = 0; r < left.rows(); r++) {
        best = std::max(best, std::abs(left(r, column)));
    }
    if (best == 0) {
        return 1.0;
    }
    for (std::size_t r = 0; r < left.rows(); r++) {
        const double mag = std::abs(left(r, column));
        if (mag >= best * (1 - 1e-9)) {
            const cplx phase = left(r, column) / mag;
            for (std::size_t k = 0; k < left.rows(); k++) {
                left(k, column) /= phase;
            }
            left(r, column) = mag;
            return phase;
        }
    }
    return 1.0;
}

// Gram-Schmidt completion of columns [first, n) against columns [0, first).
void complete_basis(ComplexMatrix &basis, std::size_t first) {
    const std::size_t n = basis.rows();
    std::size_t next_candidate = 0;
    for (std::size_t col = first; col < basis.cols(); col++) {
        while (true) {
            if (next_candidate >= n) {
                throw std::logic_error("svd: basis completion failed");
            }
            std::vector<cplx> v(n, 0.0);
            v[next_candidate++] = 1.0;
            for (int pass = 0; pass < 2; pass++) {
                for (std::size_t k = 0; k < col; k++) {
                    cplx dot = 0;
                    for (std::size_t r = 0; r < n; r++) {
                        dot += std::conj(basis(r, k)) * v[r];
                    }
                    for (std::size_t r = 0; r < n; r++) {
                        v[r] -= dot * basis(r, k);
                    }
                }
            }
            double norm = 0;
            for (const auto &x : v) {
                norm += std::norm(x);
            }
            norm = std::sqrt(norm);
            if (norm > 1e-6) {
                for (std::size_t r = 0; r < n; r++) {
                    basis(r, col) = v[r] / norm;
                }
                break;
            }
        }
    }
}

}  // namespace

SvdResult svd(const ComplexMatrix &m) {
    if (!m.is_square()) {
        throw ValidationError("svd: matrix must be square");
    }
    if (m.rows() > kMaxSvdDimension) {
        throw ResourceError("svd: dimension " + std::to_string(m.rows()) + " exceeds supported maximum");
    }
    require_finite(m, "svd");
    const std::size_t n = m.rows();

    ComplexMatrix work = m;
    ComplexMatrix right = ComplexMatrix::identity(n);
    constexpr int kMaxSweeps = 80;
    constexpr double kTolerance = 1e-15;
    for (int sweep = 0; sweep < kMaxSweeps; sweep++) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                const double alpha = column_norm2(work, p);
                const double beta = column_norm2(work, q);
                const cplx gamma = column_dot(work, p, q);
                const double g = std::abs(gamma);
                if (g == 0 || g <= kTolerance * std::sqrt(alpha * beta)) {
                    continue;
                }
                rotated = true;
                const double zeta = (beta - alpha) / (2 * g);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
                const double c = 1 / std::sqrt(1 + t * t);
                const double s = c * t;
                const cplx phase = gamma / g;
                rotate_columns(work, p, q, c, s, phase);
                rotate_columns(right, p, q, c, s, phase);
            }
        }
        if (!rotated) {
            break;
        }
    }

    std::vector<double> sigma(n);
    for (std::size_t c = 0; c < n; c++) {
        sigma[c] = std::sqrt(column_norm2(work, c));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    SvdResult result{ComplexMatrix(n, n), std::vector<double>(n), ComplexMatrix(n, n)};
    const double sigma_max = n == 0 ? 0.0 : sigma[order[0]];
    std::size_t nonzero = 0;
    for (std::size_t k = 0; k < n; k++) {
        const std::size_t src = order[k];
        double value = sigma[src];
        if (value < 1e-12 * sigma_max || value == 0) {
            value = 0;
        } else {
            nonzero = k + 1;
        }
        result.singular_values[k] = value;
        for (std::size_t r = 0; r < n; r++) {
            result.right(r, k) = right(r, src);
            if (value != 0) {
                result.left(r, k) = work(r, src) / sigma[src];
            }
        }
    }
    complete_basis(result.left, nonzero);
    for (std::size_t k = 0; k < n; k++) {
        const cplx phase = normalize_column_phase(result.left, k);
        for (std::size_t r = 0; r < n; r++) {
            result.right(r, k) /= phase;
        }
    }
    return result;
}

double spectral_norm(const ComplexMatrix &m) {
    require_finite(m, "spectral_norm");
    if (m.is_square()) {
        return svd(m).singular_values.front();
    }
    const std::size_t n = std::max(m.rows(), m.cols());
    ComplexMatrix padded(n, n);
    for (std::size_t r = 0; r < m.rows(); r++) {
        for (std::size_t c = 0; c < m.cols(); c++) {
            padded(r, c) = m(r, c);
        }
    }
    return svd(padded).singular_values.front();
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_finite(a, "kron");
    require_finite(b, "kron");
    const double entries = static_cast<double>(a.rows() * b.rows()) * static_cast<double>(a.cols() * b.cols());
    if (entries > static_cast<double>(std::size_t{1} << 30)) {
        throw ResourceError("kron: result would exceed 2^30 entries");
    }
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ar++) {
        for (std::size_t ac = 0; ac < a.cols(); ac++) {
            const cplx av = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); br++) {
                for (std::size_t bc = 0; bc < b.cols(); bc++) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = av * b(br, bc);
                }
            }
        }
    }
    return out;
}

}  // namespace qnoise
