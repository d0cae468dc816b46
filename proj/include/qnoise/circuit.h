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

#ifndef QNOISE_CIRCUIT_H
#define QNOISE_CIRCUIT_H

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qnoise/channels.h"
#include "qnoise/linalg.h"

namespace qnoise {

using Qubit = std::uint32_t;

enum class GateKind { X, Y, Z, H, S, T, RX, RY, RZ, CX, CZ, ZZ, U1, U2 };

/// Lower-case mnemonic used by the circuit file format ("cx", "rz", ...).
std::string_view gate_name(GateKind kind);
int gate_arity(GateKind kind);
bool gate_has_angle(GateKind kind);

/// A noiseless gate. Matrices use qubits[0] as the most significant bit of
/// the local index; for CX qubits[0] is the control.
struct Gate {
    GateKind kind = GateKind::X;
    std::vector<Qubit> qubits;
    double angle = 0;
    /// Only for U1 (2x2) and U2 (4x4).
    ComplexMatrix custom;

    static Gate single(GateKind kind, Qubit q);
    static Gate rotation(GateKind kind, double angle, Qubit q);
    static Gate cx(Qubit control, Qubit target);
    static Gate cz(Qubit a, Qubit b);
    static Gate zz(double angle, Qubit a, Qubit b);
    static Gate u1(ComplexMatrix m, Qubit q);
    static Gate u2(ComplexMatrix m, Qubit a, Qubit b);

    int arity() const { return gate_arity(kind); }
    ComplexMatrix matrix() const;
    /// A gate whose matrix is the adjoint of this one, on the same qubits.
    Gate inverse() const;

    bool operator==(const Gate &other) const = default;
};

/// A channel applied to an ordered list of qubits (qubits[0] is the most
/// significant bit of the channel's local index).
struct NoiseOp {
    KrausChannel channel;
    std::vector<Qubit> qubits;

    bool operator==(const NoiseOp &other) const = default;
};

using CircuitElement = std::variant<Gate, NoiseOp>;

/// Qubits touched by an element.
const std::vector<Qubit> &element_qubits(const CircuitElement &e);

/// Ordered gates and noise channels on n qubits. Qubit 0 is the most
/// significant bit of computational basis indices.
struct NoisyCircuit {
    std::size_t n_qubits = 0;
    std::vector<CircuitElement> elements;
    std::string name;

    /// Throws ValidationError on malformed elements (qubit range, duplicates,
    /// arity, non-unitary custom gates, invalid channels).
    void validate() const;

    bool has_noise() const;
    std::size_t gate_count() const;
    std::size_t noise_count() const;
    /// Same circuit with every NoiseOp removed.
    NoisyCircuit without_noise() const;

    /// Structural equality: width and element sequence. The name is ignored.
    bool same_structure(const NoisyCircuit &other) const;
};

struct CircuitStats {
    std::size_t n_qubits = 0;
    std::size_t gate_count = 0;
    std::size_t single_qubit_noise_count = 0;
    std::size_t two_qubit_noise_count = 0;
    /// Largest noise_rate over all NoiseOps (0 for noiseless circuits).
    double max_noise_rate = 0;
};

CircuitStats circuit_stats(const NoisyCircuit &c);

/// Applies `elements` in order, then the inverse of `appended` gates in
/// reverse order, removing adjacent mutually-inverse gate pairs. Two gates
/// are adjacent when no other remaining element touches any of their qubits
/// in between; they cancel when they act on the same ordered qubits and
/// their matrices multiply to the identity within 1e-12.
std::vector<CircuitElement> append_inverse_and_cancel(const std::vector<CircuitElement> &elements,
                                                      const std::vector<CircuitElement> &appended, std::size_t n_qubits);

/// Dense 2^n x 2^n unitary of a noiseless circuit (n <= 12).
ComplexMatrix circuit_unitary(const NoisyCircuit &c);

}  // namespace qnoise

#endif
