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

#ifndef QNOISE_ORACLES_H
#define QNOISE_ORACLES_H

#include <cstdint>
#include <vector>

#include "qnoise/circuit.h"
#include "qnoise/engine.h"

namespace qnoise {

inline constexpr std::size_t kDenseSimMaxQubits = 12;
inline constexpr std::size_t kDenseFidelityMaxQubits = 6;
inline constexpr std::uint64_t kKraussumMaxTerms = 1'000'000;

/// A density matrix on n qubits (qubit 0 is the most significant bit).
struct DenseState {
    std::size_t n_qubits = 0;
    ComplexMatrix rho;
};

/// Amplitude vector of a state (not "ideal").
std::vector<cplx> state_vector(const StateSpec &s, std::size_t n_qubits);

/// Applies every element of c to |psi><psi| by index arithmetic.
DenseState dense_evolve(const NoisyCircuit &c, const StateSpec &psi);

/// <v|rho|v> after dense_evolve; v may be "ideal" (v = U|psi>).
double dense_simulate(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v);

/// Sum over every Kraus index assignment of |<v|E_{d,k_d}...E_{1,k_1}|psi>|^2.
/// Throws ResourceError when the assignment count exceeds `max_terms`.
double kraus_sum_exact(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v,
                       std::uint64_t max_terms = kKraussumMaxTerms);

/// Number of Kraus index assignments kraus_sum_exact would enumerate.
std::uint64_t kraus_term_count(const NoisyCircuit &c);

/// <Psi_U| (I (x) E)(|Psi><Psi|) |Psi_U> with |Psi> maximally entangled and
/// |Psi_U> = (I (x) U)|Psi>, built as dense 2n-qubit objects.
double dense_fidelity(const NoisyCircuit &ideal, const NoisyCircuit &noisy);

struct TrajectoryEstimate {
    double mean = 0;
    /// Sample standard deviation (n - 1 denominator) over sqrt(samples).
    double std_error = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Quantum-trajectory estimate of <v|E(|psi><psi|)|v>. Sample s draws from
/// stream kTrajectoryBase + s, so the estimate does not depend on `workers`.
TrajectoryEstimate trajectories(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v, std::uint64_t samples,
                                std::uint64_t seed, std::size_t workers = 1);

/// ceil(ln(1 / (1 - confidence)) / (2 delta^2)).
std::uint64_t hoeffding_samples(double delta, double confidence = 0.99);

}  // namespace qnoise

#endif
