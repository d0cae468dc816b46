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

#ifndef QNOISE_GENERATORS_H
#define QNOISE_GENERATORS_H

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "qnoise/circuit.h"

namespace qnoise {

/// Bernstein-Vazirani on n data qubits plus one ancilla (qubit n).
/// `secret` is a string of n '0'/'1' characters, secret[i] for qubit i.
/// From |0...0> the circuit ends in the basis state secret followed by 1.
NoisyCircuit gen_bv(std::size_t n, std::string_view secret);

/// Quantum Fourier transform with controlled phases built from RZ and CX,
/// followed by the bit-reversal swaps (3 CX each). With qubit 0 as the most
/// significant bit, the unitary equals the DFT matrix
/// F[x][y] = exp(2 pi i x y / 2^n) / sqrt(2^n) up to a global phase.
NoisyCircuit gen_qft(std::size_t n);

/// QAOA-style circuit: RY(-pi/2) then RZ(pi/2) on every qubit; per layer l,
/// CZ(i,j) followed by RZ(gammas[l]) on j for each edge, then RX(betas[l])
/// on every qubit.
NoisyCircuit gen_qaoa(std::size_t n, const std::vector<std::pair<Qubit, Qubit>> &edges,
                      const std::vector<double> &gammas, const std::vector<double> &betas);

/// Random grid circuit on rows x cols qubits (qubit r*cols + c): an H layer,
/// then `depth` cycles of a seeded single-qubit layer drawn from
/// {RX(pi/2), RY(pi/2), T} and CZs on one of four alternating edge patterns.
NoisyCircuit gen_random_inst(std::size_t rows, std::size_t cols, std::size_t depth, std::uint64_t seed);

}  // namespace qnoise

#endif
