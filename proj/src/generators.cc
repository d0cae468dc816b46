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

#include "qnoise/generators.h"

#include <cmath>
#include <numbers>

#include "qnoise/errors.h"
#include "qnoise/rng.h"

namespace qnoise {

namespace {

void push(NoisyCircuit &c, Gate g) {
    c.elements.emplace_back(std::move(g));
}

// Controlled phase diag(1,1,1,e^{i lambda}) up to global phase.
void controlled_phase(NoisyCircuit &c, double lambda, Qubit control, Qubit target) {
    push(c, Gate::rotation(GateKind::RZ, lambda / 2, control));
    push(c, Gate::rotation(GateKind::RZ, lambda / 2, target));
    push(c, Gate::cx(control, target));
    push(c, Gate::rotation(GateKind::RZ, -lambda / 2, target));
    push(c, Gate::cx(control, target));
}

void swap_gate(NoisyCircuit &c, Qubit a, Qubit b) {
    push(c, Gate::cx(a, b));
    push(c, Gate::cx(b, a));
    push(c, Gate::cx(a, b));
}

}  // namespace

NoisyCircuit gen_bv(std::size_t n, std::string_view secret) {
    if (n < 1) {
        throw ValidationError("gen_bv: n must be at least 1");
    }
    if (secret.size() != n || secret.find_first_not_of("01") != std::string_view::npos) {
        throw ValidationError("gen_bv: secret must be " + std::to_string(n) + " characters of 0/1");
    }
    NoisyCircuit c{n + 1, {}, "bv_" + std::string(secret)};
    const auto anc = static_cast<Qubit>(n);
    push(c, Gate::single(GateKind::X, anc));
    for (Qubit q = 0; q <= anc; q++) {
        push(c, Gate::single(GateKind::H, q));
    }
    for (Qubit q = 0; q < anc; q++) {
        if (secret[q] == '1') {
            push(c, Gate::cx(q, anc));
        }
    }
    for (Qubit q = 0; q <= anc; q++) {
        push(c, Gate::single(GateKind::H, q));
    }
    return c;
}

NoisyCircuit gen_qft(std::size_t n) {
    if (n < 1) {
        throw ValidationError("gen_qft: n must be at least 1");
    }
    NoisyCircuit c{n, {}, "qft_" + std::to_string(n)};
    for (std::size_t j = 0; j < n; j++) {
        push(c, Gate::single(GateKind::H, static_cast<Qubit>(j)));
        for (std::size_t k = j + 1; k < n; k++) {
            const double lambda = std::numbers::pi / std::ldexp(1.0, static_cast<int>(k - j));
            controlled_phase(c, lambda, static_cast<Qubit>(k), static_cast<Qubit>(j));
        }
    }
    for (std::size_t j = 0; j < n / 2; j++) {
        swap_gate(c, static_cast<Qubit>(j), static_cast<Qubit>(n - 1 - j));
    }
    return c;
}

NoisyCircuit gen_qaoa(std::size_t n, const std::vector<std::pair<Qubit, Qubit>> &edges,
                      const std::vector<double> &gammas, const std::vector<double> &betas) {
    if (n < 1) {
        throw ValidationError("gen_qaoa: n must be at least 1");
    }
    if (gammas.size() != betas.size() || gammas.empty()) {
        throw ValidationError("gen_qaoa: need the same positive number of gammas and betas");
    }
    for (const auto &[a, b] : edges) {
        if (a >= n || b >= n || a == b) {
            throw ValidationError("gen_qaoa: bad edge " + std::to_string(a) + "-" + std::to_string(b));
        }
    }
    for (double x : gammas) {
        if (!std::isfinite(x)) {
            throw ValidationError("gen_qaoa: angles must be finite");
        }
    }
    for (double x : betas) {
        if (!std::isfinite(x)) {
            throw ValidationError("gen_qaoa: angles must be finite");
        }
    }
    NoisyCircuit c{n, {}, "qaoa_" + std::to_string(n)};
    for (Qubit q = 0; q < n; q++) {
        push(c, Gate::rotation(GateKind::RY, -std::numbers::pi / 2, q));
    }
    for (Qubit q = 0; q < n; q++) {
        push(c, Gate::rotation(GateKind::RZ, std::numbers::pi / 2, q));
    }
    for (std::size_t layer = 0; layer < gammas.size(); layer++) {
        for (const auto &[a, b] : edges) {
            push(c, Gate::cz(a, b));
            push(c, Gate::rotation(GateKind::RZ, gammas[layer], b));
        }
        for (Qubit q = 0; q < n; q++) {
            push(c, Gate::rotation(GateKind::RX, betas[layer], q));
        }
    }
    return c;
}

NoisyCircuit gen_random_inst(std::size_t rows, std::size_t cols, std::size_t depth, std::uint64_t seed) {
    if (rows < 1 || cols < 1 || depth < 1) {
        throw ValidationError("gen_random_inst: rows, cols and depth must be at least 1");
    }
    const std::size_t n = rows * cols;
    NoisyCircuit c{n, {}, "random_" + std::to_string(rows) + "x" + std::to_string(cols) + "_" + std::to_string(depth)};
    auto at = [cols](std::size_t r, std::size_t col) { return static_cast<Qubit>(r * cols + col); };
    for (Qubit q = 0; q < n; q++) {
        push(c, Gate::single(GateKind::H, q));
    }
    CounterRng rng(seed, streams::kRandomCircuit);
    for (std::size_t cycle = 0; cycle < depth; cycle++) {
        for (Qubit q = 0; q < n; q++) {
            switch (rng.next_below(3)) {
                case 0:
                    push(c, Gate::rotation(GateKind::RX, std::numbers::pi / 2, q));
                    break;
                case 1:
                    push(c, Gate::rotation(GateKind::RY, std::numbers::pi / 2, q));
                    break;
                default:
                    push(c, Gate::single(GateKind::T, q));
                    break;
            }
        }
        const std::size_t pattern = cycle % 4;
        const std::size_t parity = pattern % 2;
        if (pattern < 2) {
            for (std::size_t r = 0; r < rows; r++) {
                for (std::size_t col = parity; col + 1 < cols; col += 2) {
                    push(c, Gate::cz(at(r, col), at(r, col + 1)));
                }
            }
        } else {
            for (std::size_t r = parity; r + 1 < rows; r += 2) {
                for (std::size_t col = 0; col < cols; col++) {
                    push(c, Gate::cz(at(r, col), at(r + 1, col)));
                }
            }
        }
    }
    return c;
}

}  // namespace qnoise
