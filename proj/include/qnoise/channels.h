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

#ifndef QNOISE_CHANNELS_H
#define QNOISE_CHANNELS_H

#include <chrono>
#include <string>
#include <vector>

#include "qnoise/linalg.h"

namespace qnoise {

using Microseconds = std::chrono::duration<double, std::micro>;
using Nanoseconds = std::chrono::duration<double, std::nano>;

/// Completeness tolerance for channels built from external data.
inline constexpr double kChannelTolerance = 1e-6;

/// A quantum channel on 1 or 2 qubits, given by Kraus matrices with
/// sum_k E_k^H E_k = I.
///
/// `label` is the canonical constructor text for catalog channels (for
/// example "depolarizing(0.01)") and "kraus" for user-supplied sets; circuit
/// files re-create catalog channels from it.
struct KrausChannel {
    int arity = 1;
    std::vector<ComplexMatrix> kraus;
    std::string label;

    /// Validates shapes and completeness (within kChannelTolerance).
    /// Throws ValidationError.
    static KrausChannel from_kraus(int arity, std::vector<ComplexMatrix> kraus, std::string label = "kraus");

    /// Local dimension 2^arity.
    std::size_t dim() const { return std::size_t{1} << arity; }

    bool operator==(const KrausChannel &other) const = default;
};

/// Throws ValidationError when `ch` is malformed or incomplete beyond
/// `tolerance`.
void validate_channel(const KrausChannel &ch, double tolerance = kChannelTolerance);

/// sum_k E_k^H E_k - I in Frobenius norm.
double completeness_error(const KrausChannel &ch);

/// The matrix representation M = sum_k E_k (x) conj(E_k), acting on the
/// doubled (ket, bra) space. Row index is (ket_out, bra_out), column index
/// (ket_in, bra_in), each ranging over 2^arity.
struct SuperOpMatrix {
    int arity = 1;
    ComplexMatrix matrix;
};

/// One rank-1 term ket (x) bra of a factor decomposition. `ket` acts on the
/// ket copy of the doubled network and `bra` on the bra copy.
struct FactorTerm {
    ComplexMatrix ket;
    ComplexMatrix bra;
};

/// M = sum_j ket_j (x) bra_j, terms sorted by descending singular value.
/// Zero singular values are dropped, so terms.size() equals the rank of the
/// reshuffled matrix.
struct FactorDecomposition {
    int arity = 1;
    std::vector<FactorTerm> terms;
    std::vector<double> singular_values;

    /// Sum of all terms, for reconstruction checks.
    ComplexMatrix reconstruct() const;
};

SuperOpMatrix matrix_rep(const KrausChannel &ch);

/// Spectral norm of matrix_rep(ch) - I.
double noise_rate(const KrausChannel &ch);

/// Index permutation M[(i1,i2),(i3,i4)] -> R[(i1,i3),(i2,i4)], each index
/// ranging over 2^arity. An involution that preserves the Frobenius norm.
ComplexMatrix reshuffle(const SuperOpMatrix &s);
ComplexMatrix reshuffle(const ComplexMatrix &m, int arity);

/// Splits s into rank-1 terms via SVD of its reshuffled matrix.
///
/// With R = reshuffle(s) = sum_j sigma_j u_j v_j^H, term j is
/// ket_j = sigma_j * reshape(u_j), bra_j = reshape(conj(v_j)).
/// Terms with (relatively) equal singular values are ordered by descending
/// lexicographic comparison of the phase-normalized left vectors.
FactorDecomposition decompose(const SuperOpMatrix &s);

/// The leading term of decompose(s).
FactorTerm dominant(const SuperOpMatrix &s);

// --- Catalog ---------------------------------------------------------------

/// {sqrt(1-p) I, sqrt(p/3) X, sqrt(p/3) Y, sqrt(p/3) Z}.
KrausChannel depolarizing(double p);

/// Energy relaxation over gate time dt.
KrausChannel amplitude_damping(Microseconds t1, Nanoseconds dt);

/// Pure dephasing with 1/T_phi = 1/T2 - 1/(2 T1). Requires 0 < t2 <= 2 t1.
KrausChannel phase_damping(Microseconds t1, Microseconds t2, Nanoseconds dt);

/// phase_damping after amplitude_damping; Kraus set is all pairwise
/// products with zero-norm products dropped.
KrausChannel decoherence(Microseconds t1, Microseconds t2, Nanoseconds dt);

/// sqrt(1-p) I4 and sqrt(p/15) (sigma_a (x) sigma_b) over the 15
/// non-identity Pauli pairs.
KrausChannel two_qubit_depolarizing(double p);

/// Unitary diag(e^{-i t/2}, e^{i t/2}, e^{i t/2}, e^{-i t/2}).
KrausChannel zz_crosstalk(double theta);

/// Single-Kraus channel {u}. Validates unitarity.
KrausChannel unitary_channel(const ComplexMatrix &u, std::string label = "kraus");

/// Identity channel on `arity` qubits.
KrausChannel identity_channel(int arity = 1);

/// Composition `second` after `first` on the same qubits; Kraus set of all
/// products second_i * first_j with zero-norm products dropped.
KrausChannel compose(const KrausChannel &second, const KrausChannel &first, std::string label = "kraus");

/// Pauli matrices I, X, Y, Z (index 0..3).
const ComplexMatrix &pauli(int index);

/// Shortest text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace qnoise

#endif
