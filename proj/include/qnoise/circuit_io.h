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

#ifndef QNOISE_CIRCUIT_IO_H
#define QNOISE_CIRCUIT_IO_H

#include <string>
#include <string_view>

#include "qnoise/channels.h"
#include "qnoise/circuit.h"

namespace qnoise {

/// Parses the line-oriented circuit format:
///
///   # comment
///   qubits 3
///   h q0
///   rz(pi/4) q1
///   cx q0 q1
///   u1 q2 [0+0i 1+0i 1+0i 0+0i]
///   noise depolarizing(0.01) q1
///   noise decoherence(200,30,25) q2
///   noise kraus q0 [[1+0i 0+0i 0+0i 1+0i]]
///
/// Angles accept plain numbers and the forms `pi`, `-pi/2`, `0.25*pi`.
/// Matrices are row-major with complex entries written `a+bi`, separated by
/// whitespace or commas. Every error, including out-of-range qubits and
/// invalid matrices, is reported as a ParseError with a 1-based position.
NoisyCircuit parse_circuit(std::string_view text);

/// Inverse of parse_circuit. Catalog channels are written by label when the
/// label re-creates the same Kraus set; anything else is written inline.
std::string emit_circuit(const NoisyCircuit &c);

/// Parses a catalog channel such as "depolarizing(0.01)", "depolarizing2(p)",
/// "decoherence(t1_us,t2_us,dt_ns)", "amplitude_damping(t1_us,dt_ns)",
/// "phase_damping(t1_us,t2_us,dt_ns)" or "zz(theta)".
KrausChannel parse_channel_spec(std::string_view text);

/// Writes a complex number as `a+bi` with round-trip precision.
std::string format_complex(cplx z);

}  // namespace qnoise

#endif
