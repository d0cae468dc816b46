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

#include "qnoise/channels.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>

#include "qnoise/errors.h"

namespace qnoise {

namespace {

// Kraus sets from the catalog keep only matrices with nonzero entries.
std::vector<ComplexMatrix> drop_zero(std::vector<ComplexMatrix> kraus) {
    std::erase_if(kraus, [](const ComplexMatrix &m) { return m.frobenius_norm() == 0; });
    return kraus;
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) {
        throw std::logic_error("format_double: to_chars failed");
    }
    return std::string(buf.data(), end);
}

const ComplexMatrix &pauli(int index) {
    static const std::array<ComplexMatrix, 4> kPaulis = {
        ComplexMatrix{{1, 0}, {0, 1}},
        ComplexMatrix{{0, 1}, {1, 0}},
        ComplexMatrix{{0, cplx(0, -1)}, {cplx(0, 1), 0}},
        ComplexMatrix{{1, 0}, {0, -1}},
    };
    return kPaulis.at(static_cast<std::size_t>(index));
}

double completeness_error(const KrausChannel &ch) {
    ComplexMatrix sum(ch.dim(), ch.dim());
    for (const auto &e : ch.kraus) {
        sum += e.adjoint() * e;
    }
    return frobenius_distance(sum, ComplexMatrix::identity(ch.dim()));
}

void validate_channel(const KrausChannel &ch, double tolerance) {
    if (ch.arity != 1 && ch.arity != 2) {
        throw ValidationError("channel arity must be 1 or 2, got " + std::to_string(ch.arity));
    }
    if (ch.kraus.empty()) {
        throw ValidationError("channel has no Kraus matrices");
    }
    for (const auto &e : ch.kraus) {
        if (e.rows() != ch.dim() || e.cols() != ch.dim()) {
            throw ValidationError("Kraus matrix shape does not match channel arity");
        }
        if (!e.all_finite()) {
            throw ValidationError("Kraus matrix has non-finite entries");
        }
    }
    const double err = completeness_error(ch);
    if (!(err <= tolerance)) {
        throw ValidationError("Kraus completeness violated: |sum E^H E - I| = " + format_double(err));
    }
}

KrausChannel KrausChannel::from_kraus(int arity, std::vector<ComplexMatrix> kraus, std::string label) {
    KrausChannel ch{arity, std::move(kraus), std::move(label)};
    validate_channel(ch);
    return ch;
}

ComplexMatrix FactorDecomposition::reconstruct() const {
    const std::size_t d = std::size_t{1} << arity;
    ComplexMatrix sum(d * d, d * d);
    for (const auto &t : terms) {
        sum += kron(t.ket, t.bra);
    }
    return sum;
}

SuperOpMatrix matrix_rep(const KrausChannel &ch) {
    validate_channel(ch);
    const std::size_t d = ch.dim();
    SuperOpMatrix s{ch.arity, ComplexMatrix(d * d, d * d)};
    for (const auto &e : ch.kraus) {
        s.matrix += kron(e, e.conjugate());
    }
    return s;
}

double noise_rate(const KrausChannel &ch) {
    const SuperOpMatrix s = matrix_rep(ch);
    return spectral_norm(s.matrix - ComplexMatrix::identity(s.matrix.rows()));
}

ComplexMatrix reshuffle(const ComplexMatrix &m, int arity) {
    if (arity != 1 && arity != 2) {
        throw ValidationError("reshuffle: arity must be 1 or 2");
    }
    const std::size_t d = std::size_t{1} << arity;
    if (m.rows() != d * d || m.cols() != d * d) {
        throw ValidationError("reshuffle: expected a " + std::to_string(d * d) + "x" + std::to_string(d * d) + " matrix");
    }
    ComplexMatrix out(d * d, d * d);
    for (std::size_t i1 = 0; i1 < d; i1++) {
        for (std::size_t i2 = 0; i2 < d; i2++) {
            for (std::size_t i3 = 0; i3 < d; i3++) {
                for (std::size_t i4 = 0; i4 < d; i4++) {
                    out(i1 * d + i3, i2 * d + i4) = m(i1 * d + i2, i3 * d + i4);
                }
            }
        }
    }
    return out;
}

ComplexMatrix reshuffle(const SuperOpMatrix &s) {
    return reshuffle(s.matrix, s.arity);
}

namespace {

bool lex_greater(const ComplexMatrix &left, std::size_t a, std::size_t b) {
    for (std::size_t r = 0; r < left.rows(); r++) {
        const cplx x = left(r, a);
        const cplx y = left(r, b);
        if (x.real() != y.real()) {
            return x.real() > y.real();
        }
        if (x.imag() != y.imag()) {
            return x.imag() > y.imag();
        }
    }
    return false;
}

}  // namespace

FactorDecomposition decompose(const SuperOpMatrix &s) {
    const std::size_t d = std::size_t{1} << s.arity;
    const SvdResult r = svd(reshuffle(s));
    const std::size_t n = r.singular_values.size();
    const double sigma_max = n == 0 ? 0.0 : r.singular_values.front();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Singular values arrive sorted; reorder each run of (nearly) equal
    // values by the phase-normalized left vectors.
    for (std::size_t start = 0; start < n;) {
        std::size_t stop = start + 1;
        while (stop < n && r.singular_values[stop - 1] - r.singular_values[stop] <= 1e-9 * sigma_max) {
            stop++;
        }
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(stop),
                         [&](std::size_t a, std::size_t b) { return lex_greater(r.left, a, b); });
        start = stop;
    }

    FactorDecomposition out;
    out.arity = s.arity;
    for (std::size_t k : order) {
        const double sigma = r.singular_values[k];
        if (sigma == 0) {
            continue;
        }
        FactorTerm term{ComplexMatrix(d, d), ComplexMatrix(d, d)};
        for (std::size_t row = 0; row < d; row++) {
            for (std::size_t col = 0; col < d; col++) {
                term.ket(row, col) = sigma * r.left(row * d + col, k);
                term.bra(row, col) = std::conj(r.right(row * d + col, k));
            }
        }
        out.terms.push_back(std::move(term));
        out.singular_values.push_back(sigma);
    }
    return out;
}

FactorTerm dominant(const SuperOpMatrix &s) {
    FactorDecomposition dec = decompose(s);
    if (dec.terms.empty()) {
        throw ValidationError("dominant: super-operator is zero");
    }
    return dec.terms.front();
}

KrausChannel identity_channel(int arity) {
    const std::size_t d = std::size_t{1} << arity;
    return KrausChannel::from_kraus(arity, {ComplexMatrix::identity(d)}, arity == 1 ? "depolarizing(0)" : "depolarizing2(0)");
}

KrausChannel depolarizing(double p) {
    if (!(p >= 0 && p <= 1)) {
        throw ValidationError("depolarizing: p must lie in [0, 1]");
    }
    const double a = std::sqrt(1 - p);
    const double b = std::sqrt(p / 3);
    std::vector<ComplexMatrix> kraus = {a * pauli(0), b * pauli(1), b * pauli(2), b * pauli(3)};
    return KrausChannel::from_kraus(1, drop_zero(std::move(kraus)), "depolarizing(" + format_double(p) + ")");
}

KrausChannel amplitude_damping(Microseconds t1, Nanoseconds dt) {
    if (!(t1.count() > 0) || !std::isfinite(t1.count())) {
        throw ValidationError("amplitude_damping: t1 must be positive");
    }
    if (!(dt.count() >= 0) || !std::isfinite(dt.count())) {
        throw ValidationError("amplitude_damping: dt must be non-negative");
    }
    const double ratio = dt / t1;
    ComplexMatrix e1{{1, 0}, {0, std::exp(-ratio / 2)}};
    ComplexMatrix e2{{0, std::sqrt(1 - std::exp(-ratio))}, {0, 0}};
    return KrausChannel::from_kraus(1, drop_zero({e1, e2}),
                                    "amplitude_damping(" + format_double(t1.count()) + "," + format_double(dt.count()) + ")");
}

namespace {

// 1/T_phi in units of 1/us.
double dephasing_rate(Microseconds t1, Microseconds t2) {
    if (!(t1.count() > 0) || !std::isfinite(t1.count())) {
        throw ValidationError("phase_damping: t1 must be positive");
    }
    if (!(t2.count() > 0) || !std::isfinite(t2.count())) {
        throw ValidationError("phase_damping: t2 must be positive");
    }
    if (t2 > 2 * t1) {
        throw ValidationError("phase_damping: t2 > 2*t1 gives a non-positive dephasing time");
    }
    return std::max(0.0, 1 / t2.count() - 1 / (2 * t1.count()));
}

std::vector<ComplexMatrix> phase_damping_kraus(Microseconds t1, Microseconds t2, Nanoseconds dt) {
    const double rate = dephasing_rate(t1, t2);
    if (!(dt.count() >= 0) || !std::isfinite(dt.count())) {
        throw ValidationError("phase_damping: dt must be non-negative");
    }
    const double x = Microseconds(dt).count() * rate;
    const double keep = std::exp(-x / 2);
    const double flip = std::sqrt(1 - std::exp(-x));
    return drop_zero({
        ComplexMatrix{{keep, 0}, {0, keep}},
        ComplexMatrix{{flip, 0}, {0, 0}},
        ComplexMatrix{{0, 0}, {0, flip}},
    });
}

std::string time_triple(Microseconds t1, Microseconds t2, Nanoseconds dt) {
    return format_double(t1.count()) + "," + format_double(t2.count()) + "," + format_double(dt.count());
}

}  // namespace

KrausChannel phase_damping(Microseconds t1, Microseconds t2, Nanoseconds dt) {
    return KrausChannel::from_kraus(1, phase_damping_kraus(t1, t2, dt), "phase_damping(" + time_triple(t1, t2, dt) + ")");
}

KrausChannel compose(const KrausChannel &second, const KrausChannel &first, std::string label) {
    if (second.arity != first.arity) {
        throw ValidationError("compose: arity mismatch");
    }
    std::vector<ComplexMatrix> kraus;
    for (const auto &a : second.kraus) {
        for (const auto &b : first.kraus) {
            kraus.push_back(a * b);
        }
    }
    kraus = drop_zero(std::move(kraus));
    if (kraus.empty()) {
        throw ValidationError("compose: all products vanish");
    }
    return KrausChannel::from_kraus(first.arity, std::move(kraus), std::move(label));
}

KrausChannel decoherence(Microseconds t1, Microseconds t2, Nanoseconds dt) {
    const KrausChannel amp = amplitude_damping(t1, dt);
    const KrausChannel phase = phase_damping(t1, t2, dt);
    return compose(phase, amp, "decoherence(" + time_triple(t1, t2, dt) + ")");
}

KrausChannel two_qubit_depolarizing(double p) {
    if (!(p >= 0 && p <= 1)) {
        throw ValidationError("two_qubit_depolarizing: p must lie in [0, 1]");
    }
    std::vector<ComplexMatrix> kraus;
    kraus.push_back(std::sqrt(1 - p) * ComplexMatrix::identity(4));
    const double b = std::sqrt(p / 15);
    for (int a = 0; a < 4; a++) {
        for (int c = 0; c < 4; c++) {
            if (a == 0 && c == 0) {
                continue;
            }
            kraus.push_back(b * kron(pauli(a), pauli(c)));
        }
    }
    return KrausChannel::from_kraus(2, drop_zero(std::move(kraus)), "depolarizing2(" + format_double(p) + ")");
}

KrausChannel zz_crosstalk(double theta) {
    if (!std::isfinite(theta)) {
        throw ValidationError("zz_crosstalk: theta must be finite");
    }
    const cplx minus = std::polar(1.0, -theta / 2);
    const cplx plus = std::polar(1.0, theta / 2);
    ComplexMatrix u(4, 4);
    u(0, 0) = minus;
    u(1, 1) = plus;
    u(2, 2) = plus;
    u(3, 3) = minus;
    return KrausChannel::from_kraus(2, {u}, "zz(" + format_double(theta) + ")");
}

KrausChannel unitary_channel(const ComplexMatrix &u, std::string label) {
    if (!u.is_square() || (u.rows() != 2 && u.rows() != 4)) {
        throw ValidationError("unitary_channel: expected a 2x2 or 4x4 matrix");
    }
    const int arity = u.rows() == 2 ? 1 : 2;
    return KrausChannel::from_kraus(arity, {u}, std::move(label));
}

}  // namespace qnoise
