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

#ifndef QNOISE_ENGINE_H
#define QNOISE_ENGINE_H

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qnoise/circuit.h"
#include "qnoise/tensornet.h"

namespace qnoise {

/// A pure state given as a superposition of product states, or (for output
/// states) the marker "ideal output", meaning v = U|psi> for the circuit's
/// noiseless unitary U.
struct StateSpec {
    std::vector<std::pair<cplx, ProductState>> terms;
    bool ideal_output = false;

    static StateSpec product(std::string qubits);
    static StateSpec ideal();
    /// "ideal" or a product string such as "0+1r".
    static StateSpec parse(std::string_view text);

    /// Throws ValidationError on width mismatch, unknown characters, an
    /// empty superposition, or ideal_output where it is not allowed.
    void validate(std::size_t n_qubits, bool allow_ideal) const;
};

struct EngineOptions {
    ContractOptions contraction;
    /// Threads for pattern contractions; 0 means hardware concurrency.
    std::size_t workers = 1;
    /// Receives warnings such as imaginary residue above 1e-9.
    std::function<void(const std::string &)> warn;
};

/// Worker count actually used for `requested` (0 = hardware concurrency).
std::size_t effective_workers(std::size_t requested);

struct BoundParams {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double p = 0;
    std::size_t level = 0;
};

/// Bound on |exact - A(l)|.
///
/// loose:   sum_{u=l+1}^{N} C(N,u) (16p)^u (1+16p)^(N-u),  N = n1 + n2
/// refined: sum_{u=l+1}^{N} sum_{i} C(n1,i) C(n2,u-i) (4p)^i (16p)^(u-i)
///                          (1+4p)^(n1-i) (1+16p)^(n2-u+i)
double error_bound(const BoundParams &bp, bool refined);

/// Component contractions of the level-l approximation:
/// 2 * sum_{u<=l} sum_i C(n1,i) C(n2,u-i) 3^i 15^(u-i).
/// Throws ResourceError if the count does not fit in 64 bits.
std::uint64_t term_count(std::size_t n1, std::size_t n2, std::size_t level);

struct ApproxReport {
    /// A(l) = sum of level_sums, reported raw.
    double value = 0;
    /// value clamped to [0, 1].
    double clamped = 0;
    std::size_t level = 0;
    /// T_0 .. T_l.
    std::vector<double> level_sums;
    /// term_count(n1, n2, level).
    std::uint64_t contraction_count = 0;
    /// Contractions actually run: patterns using a factor that vanishes are
    /// known to be zero and skipped, and superposed boundary states multiply
    /// the count.
    std::uint64_t contractions_performed = 0;
    std::uint64_t patterns = 0;
    double bound = 0;
    double bound_loose = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double p = 0;
    double max_imag = 0;
    double elapsed_seconds = 0;
    std::size_t workers = 1;
    std::vector<std::string> warnings;
};

/// <v|E(|psi><psi|)|v> by full contraction of the doubled network.
double simulate_exact(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v, const EngineOptions &options = {});

/// Level-l approximation: every noise slot takes its dominant factor except
/// at most l slots, which take one residual factor each (3 choices for a
/// 1-qubit channel, 15 for a 2-qubit one). Each pattern splits into ket and
/// bra components that are contracted separately and multiplied.
ApproxReport simulate_approx(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v, std::size_t level,
                             const EngineOptions &options = {});

/// <x|E(rho0)|y> for computational basis states x, y (bit strings, qubit 0
/// first), from four output probabilities on (|x> +- |y>)/sqrt2 and
/// (|x> +- i|y>)/sqrt2. Uses the level-l approximation when `level` is set.
cplx density_matrix_entry(const NoisyCircuit &c, const StateSpec &rho0, std::string_view x, std::string_view y,
                          const EngineOptions &options = {}, std::optional<std::size_t> level = std::nullopt);

/// 4^-n Tr((U^H (x) U^T) M_E) by full contraction.
double fidelity_exact(const NoisyCircuit &ideal, const NoisyCircuit &noisy, const EngineOptions &options = {});

/// Level-l approximation of fidelity_exact.
ApproxReport fidelity_approx(const NoisyCircuit &ideal, const NoisyCircuit &noisy, std::size_t level,
                             const EngineOptions &options = {});

}  // namespace qnoise

#endif
