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

#include "qnoise/oracles.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "qnoise/errors.h"
#include "qnoise/rng.h"

namespace qnoise {

namespace {

/// Applies a 2^k x 2^k matrix to the bits at `positions` (most significant
/// first, counted from the least significant end of the index) of a vector
/// over `total_bits` bits.
void apply_local(std::vector<cplx> &vec, std::size_t total_bits, const std::vector<std::size_t> &positions,
                 const ComplexMatrix &m) {
    const std::size_t k = positions.size();
    const std::size_t d = std::size_t{1} << k;
    std::size_t mask = 0;
    for (std::size_t p : positions) {
        mask |= std::size_t{1} << p;
    }
    std::vector<std::size_t> offset(d, 0);
    for (std::size_t local = 0; local < d; local++) {
        for (std::size_t j = 0; j < k; j++) {
            if ((local >> (k - 1 - j)) & 1) {
                offset[local] |= std::size_t{1} << positions[j];
            }
        }
    }
    std::vector<cplx> in(d);
    const std::size_t size = std::size_t{1} << total_bits;
    for (std::size_t base = 0; base < size; base++) {
        if (base & mask) {
            continue;
        }
        for (std::size_t r = 0; r < d; r++) {
            in[r] = vec[base | offset[r]];
        }
        for (std::size_t r = 0; r < d; r++) {
            cplx acc = 0;
            for (std::size_t c = 0; c < d; c++) {
                acc += m(r, c) * in[c];
            }
            vec[base | offset[r]] = acc;
        }
    }
}

std::vector<std::size_t> qubit_bits(const std::vector<Qubit> &qs, std::size_t n, std::size_t shift) {
    std::vector<std::size_t> out;
    for (Qubit q : qs) {
        out.push_back(shift + n - 1 - q);
    }
    return out;
}

// sum_k E_k (x) conj(E_k), assembled here rather than taken from the
// channels module so the oracle stays independent of it.
ComplexMatrix local_superop(const KrausChannel &ch) {
    const std::size_t d = ch.dim();
    ComplexMatrix s(d * d, d * d);
    for (const auto &e : ch.kraus) {
        for (std::size_t r1 = 0; r1 < d; r1++) {
            for (std::size_t r2 = 0; r2 < d; r2++) {
                for (std::size_t c1 = 0; c1 < d; c1++) {
                    for (std::size_t c2 = 0; c2 < d; c2++) {
                        s(r1 * d + r2, c1 * d + c2) += e(r1, c1) * std::conj(e(r2, c2));
                    }
                }
            }
        }
    }
    return s;
}

// Density matrix stored row-major as a vector over 2n bits: row bits high.
void evolve_density(std::vector<cplx> &rho, std::size_t n, const NoisyCircuit &c, std::size_t offset) {
    const std::size_t total = 2 * n;
    for (const auto &e : c.elements) {
        const auto &qs = element_qubits(e);
        std::vector<Qubit> shifted;
        for (Qubit q : qs) {
            shifted.push_back(static_cast<Qubit>(q + offset));
        }
        const auto row_bits = qubit_bits(shifted, n, n);
        const auto col_bits = qubit_bits(shifted, n, 0);
        if (const auto *g = std::get_if<Gate>(&e)) {
            const ComplexMatrix u = g->matrix();
            apply_local(rho, total, row_bits, u);
            apply_local(rho, total, col_bits, u.conjugate());
        } else {
            std::vector<std::size_t> both = row_bits;
            both.insert(both.end(), col_bits.begin(), col_bits.end());
            apply_local(rho, total, both, local_superop(std::get<NoiseOp>(e).channel));
        }
    }
}

std::vector<cplx> apply_gates(std::vector<cplx> psi, std::size_t n, const NoisyCircuit &c, std::size_t offset) {
    for (const auto &e : c.elements) {
        if (const auto *g = std::get_if<Gate>(&e)) {
            std::vector<Qubit> shifted;
            for (Qubit q : g->qubits) {
                shifted.push_back(static_cast<Qubit>(q + offset));
            }
            apply_local(psi, n, qubit_bits(shifted, n, 0), g->matrix());
        }
    }
    return psi;
}

std::vector<cplx> output_vector(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v) {
    if (v.ideal_output) {
        return apply_gates(state_vector(psi, c.n_qubits), c.n_qubits, c.without_noise(), 0);
    }
    return state_vector(v, c.n_qubits);
}

void check_width(const NoisyCircuit &c, std::size_t cap, const char *what) {
    if (c.n_qubits > cap) {
        throw ResourceError(std::string(what) + ": at most " + std::to_string(cap) + " qubits (got " +
                            std::to_string(c.n_qubits) + ")");
    }
}

double expectation(const std::vector<cplx> &rho, const std::vector<cplx> &v) {
    const std::size_t dim = v.size();
    cplx acc = 0;
    for (std::size_t r = 0; r < dim; r++) {
        if (v[r] == cplx(0)) {
            continue;
        }
        cplx row = 0;
        for (std::size_t col = 0; col < dim; col++) {
            row += rho[r * dim + col] * v[col];
        }
        acc += std::conj(v[r]) * row;
    }
    return acc.real();
}

}  // namespace

std::vector<cplx> state_vector(const StateSpec &s, std::size_t n_qubits) {
    s.validate(n_qubits, false);
    std::vector<cplx> out(std::size_t{1} << n_qubits, 0.0);
    for (const auto &[coef, state] : s.terms) {
        std::vector<cplx> v{coef};
        for (char ch : state.qubits) {
            const auto amp = ProductState::amplitudes(ch);
            std::vector<cplx> next(v.size() * 2);
            for (std::size_t i = 0; i < v.size(); i++) {
                next[2 * i] = v[i] * amp[0];
                next[2 * i + 1] = v[i] * amp[1];
            }
            v = std::move(next);
        }
        for (std::size_t i = 0; i < v.size(); i++) {
            out[i] += v[i];
        }
    }
    return out;
}

DenseState dense_evolve(const NoisyCircuit &c, const StateSpec &psi) {
    check_width(c, kDenseSimMaxQubits, "dense_simulate");
    c.validate();
    const std::size_t n = c.n_qubits;
    const std::vector<cplx> v = state_vector(psi, n);
    const std::size_t dim = v.size();
    std::vector<cplx> rho(dim * dim);
    for (std::size_t r = 0; r < dim; r++) {
        for (std::size_t col = 0; col < dim; col++) {
            rho[r * dim + col] = v[r] * std::conj(v[col]);
        }
    }
    evolve_density(rho, n, c, 0);
    return DenseState{n, ComplexMatrix(dim, dim, std::move(rho))};
}

double dense_simulate(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v) {
    const DenseState state = dense_evolve(c, psi);
    return expectation(state.rho.entries(), output_vector(c, psi, v));
}

std::uint64_t kraus_term_count(const NoisyCircuit &c) {
    std::uint64_t count = 1;
    for (const auto &e : c.elements) {
        if (const auto *op = std::get_if<NoiseOp>(&e)) {
            const std::uint64_t k = op->channel.kraus.size();
            if (count > std::numeric_limits<std::uint64_t>::max() / k) {
                return std::numeric_limits<std::uint64_t>::max();
            }
            count *= k;
        }
    }
    return count;
}

double kraus_sum_exact(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v, std::uint64_t max_terms) {
    check_width(c, kDenseSimMaxQubits, "kraus_sum_exact");
    c.validate();
    const std::uint64_t terms = kraus_term_count(c);
    if (terms > max_terms) {
        throw ResourceError("kraus_sum_exact: " + std::to_string(terms) + " Kraus terms exceed the cap of " +
                            std::to_string(max_terms));
    }
    const std::size_t n = c.n_qubits;
    const std::vector<cplx> out = output_vector(c, psi, v);
    double total = 0;
    // Depth-first over elements; each noise op branches over its Kraus set.
    std::function<void(std::size_t, std::vector<cplx>)> walk = [&](std::size_t at, std::vector<cplx> phi) {
        for (; at < c.elements.size(); at++) {
            const auto &e = c.elements[at];
            if (const auto *g = std::get_if<Gate>(&e)) {
                apply_local(phi, n, qubit_bits(g->qubits, n, 0), g->matrix());
                continue;
            }
            const auto &op = std::get<NoiseOp>(e);
            const auto bits = qubit_bits(op.qubits, n, 0);
            for (const auto &k : op.channel.kraus) {
                std::vector<cplx> branch = phi;
                apply_local(branch, n, bits, k);
                walk(at + 1, std::move(branch));
            }
            return;
        }
        cplx amp = 0;
        for (std::size_t i = 0; i < phi.size(); i++) {
            amp += std::conj(out[i]) * phi[i];
        }
        total += std::norm(amp);
    };
    walk(0, state_vector(psi, n));
    return total;
}

double dense_fidelity(const NoisyCircuit &ideal, const NoisyCircuit &noisy) {
    if (ideal.n_qubits != noisy.n_qubits) {
        throw ValidationError("dense_fidelity: width mismatch");
    }
    if (ideal.has_noise()) {
        throw ValidationError("dense_fidelity: the ideal circuit contains noise");
    }
    check_width(noisy, kDenseFidelityMaxQubits, "dense_fidelity");
    ideal.validate();
    noisy.validate();
    const std::size_t n = noisy.n_qubits;
    const std::size_t total = 2 * n;
    const std::size_t dim = std::size_t{1} << total;
    // |Psi> = 2^{-n/2} sum_i |i>_ref |i>_sys, reference qubits 0..n-1.
    std::vector<cplx> psi(dim, 0.0);
    const double amp = std::ldexp(1.0, -static_cast<int>(n)) * std::sqrt(std::ldexp(1.0, static_cast<int>(n)));
    for (std::size_t i = 0; i < (std::size_t{1} << n); i++) {
        psi[(i << n) | i] = amp;
    }
    std::vector<cplx> rho(dim * dim);
    for (std::size_t r = 0; r < dim; r++) {
        if (psi[r] == cplx(0)) {
            continue;
        }
        for (std::size_t col = 0; col < dim; col++) {
            rho[r * dim + col] = psi[r] * std::conj(psi[col]);
        }
    }
    evolve_density(rho, total, noisy, n);
    const std::vector<cplx> psi_u = apply_gates(psi, total, ideal, n);
    return expectation(rho, psi_u);
}

TrajectoryEstimate trajectories(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v, std::uint64_t samples,
                                std::uint64_t seed, std::size_t workers) {
    if (samples < 1) {
        throw ValidationError("trajectories: need at least one sample");
    }
    check_width(c, 24, "trajectories");
    c.validate();
    const std::size_t n = c.n_qubits;
    struct Op {
        std::vector<std::size_t> bits;
        std::vector<ComplexMatrix> mats;
        bool noise;
    };
    std::vector<Op> ops;
    for (const auto &e : c.elements) {
        if (const auto *g = std::get_if<Gate>(&e)) {
            ops.push_back({qubit_bits(g->qubits, n, 0), {g->matrix()}, false});
        } else {
            const auto &op = std::get<NoiseOp>(e);
            ops.push_back({qubit_bits(op.qubits, n, 0), op.channel.kraus, true});
        }
    }
    const std::vector<cplx> start = state_vector(psi, n);
    const std::vector<cplx> out = output_vector(c, psi, v);

    std::vector<double> results(samples);
    auto run = [&](std::uint64_t s) {
        CounterRng rng(seed, streams::kTrajectoryBase + s);
        std::vector<cplx> phi = start;
        std::vector<cplx> branch;
        for (const auto &op : ops) {
            if (!op.noise) {
                apply_local(phi, n, op.bits, op.mats[0]);
                continue;
            }
            const double norm_before = [&] {
                double acc = 0;
                for (const auto &a : phi) {
                    acc += std::norm(a);
                }
                return acc;
            }();
            while (true) {
                const double u = rng.next_uniform() * norm_before;
                double cumulative = 0;
                bool chosen = false;
                for (std::size_t k = 0; k < op.mats.size(); k++) {
                    branch = phi;
                    apply_local(branch, n, op.bits, op.mats[k]);
                    double weight = 0;
                    for (const auto &a : branch) {
                        weight += std::norm(a);
                    }
                    cumulative += weight;
                    if (u < cumulative || k + 1 == op.mats.size()) {
                        if (weight <= 0) {
                            break;  // numerically impossible branch: draw again
                        }
                        const double scale = std::sqrt(norm_before / weight);
                        for (auto &a : branch) {
                            a *= scale;
                        }
                        phi.swap(branch);
                        chosen = true;
                        break;
                    }
                }
                if (chosen) {
                    break;
                }
            }
        }
        cplx amp = 0;
        for (std::size_t i = 0; i < phi.size(); i++) {
            amp += std::conj(out[i]) * phi[i];
        }
        double norm = 0;
        for (const auto &a : phi) {
            norm += std::norm(a);
        }
        results[s] = std::norm(amp) / norm;
    };

    const std::size_t w = std::min<std::uint64_t>(effective_workers(workers), samples);
    if (w <= 1) {
        for (std::uint64_t s = 0; s < samples; s++) {
            run(s);
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < w; t++) {
            pool.emplace_back([&] {
                for (std::uint64_t s = next.fetch_add(1); s < samples; s = next.fetch_add(1)) {
                    run(s);
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    TrajectoryEstimate est;
    est.samples = samples;
    est.seed = seed;
    double sum = 0;
    for (double r : results) {
        sum += r;
    }
    est.mean = sum / static_cast<double>(samples);
    if (samples > 1) {
        double ss = 0;
        for (double r : results) {
            ss += (r - est.mean) * (r - est.mean);
        }
        est.std_error = std::sqrt(ss / static_cast<double>(samples - 1)) / std::sqrt(static_cast<double>(samples));
    }
    return est;
}

std::uint64_t hoeffding_samples(double delta, double confidence) {
    if (!(delta > 0 && delta < 1)) {
        throw ValidationError("hoeffding_samples: delta must lie in (0, 1)");
    }
    if (!(confidence > 0 && confidence < 1)) {
        throw ValidationError("hoeffding_samples: confidence must lie in (0, 1)");
    }
    return static_cast<std::uint64_t>(std::ceil(std::log(1 / (1 - confidence)) / (2 * delta * delta)));
}

}  // namespace qnoise
