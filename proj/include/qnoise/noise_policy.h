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

#ifndef QNOISE_NOISE_POLICY_H
#define QNOISE_NOISE_POLICY_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qnoise/channels.h"
#include "qnoise/circuit.h"

namespace qnoise {

/// Undirected device connectivity.
struct CouplingGraph {
    std::size_t n_qubits = 0;
    std::vector<std::pair<Qubit, Qubit>> edges;

    /// Throws ValidationError on self-loops or out-of-range endpoints.
    void validate() const;
};

/// File format: `qubits <n>` then one `edge <i> <j>` per line; `#` comments.
/// Throws ParseError with a position.
CouplingGraph parse_coupling_graph(std::string_view text);
std::string emit_coupling_graph(const CouplingGraph &g);

/// Path 0-1-2-...-(n-1).
CouplingGraph line_graph(std::size_t n);

enum class PolicyMode { Explicit, PerGate, RandomK, CrosstalkLayered };

struct NoisePolicy {
    PolicyMode mode = PolicyMode::Explicit;
    /// Template for per-gate and random-k.
    KrausChannel channel = depolarizing(0.001);
    std::size_t k = 0;
    std::optional<std::uint64_t> seed;
    std::optional<CouplingGraph> graph;
};

/// Parses `explicit`, `per-gate[:channel=SPEC]`,
/// `random-k:K[:seed=S][:channel=SPEC]` and `crosstalk[:seed=S]`.
/// The coupling graph of crosstalk mode is attached separately.
NoisePolicy parse_noise_policy(std::string_view text);

/// Inserts noise according to `policy`. Existing NoiseOps are kept in place,
/// so policies compose.
///
/// per-gate: one instance after every gate. A depolarizing template becomes
/// two-qubit depolarizing with the same p after 2-qubit gates; other 1-qubit
/// templates go after each qubit of a 2-qubit gate; 2-qubit templates follow
/// 2-qubit gates only.
///
/// random-k: k distinct gates (among those with arity >= the template's),
/// chosen by a partial Fisher-Yates shuffle; a 1-qubit template after a
/// 2-qubit gate lands on one of its qubits, also chosen by the generator.
///
/// crosstalk: greedy layering; after each layer, every edge with exactly one
/// busy endpoint receives zz(theta), theta uniform in [-0.1, 0.1).
NoisyCircuit apply_noise_policy(const NoisyCircuit &c, const NoisePolicy &policy);

/// Greedy left-to-right layering: consecutive elements join the current
/// layer while their qubits are free in it. Returns element index ranges
/// [begin, end).
std::vector<std::pair<std::size_t, std::size_t>> greedy_layers(const NoisyCircuit &c);

}  // namespace qnoise

#endif
