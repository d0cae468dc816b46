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

#include "qnoise/circuit.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qnoise/errors.h"

namespace qnoise {

std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::X:
            return "x";
        case GateKind::Y:
            return "y";
        case GateKind::Z:
            return "z";
        case GateKind::H:
            return "h";
        case GateKind::S:
            return "s";
        case GateKind::T:
            return "t";
        case GateKind::RX:
            return "rx";
        case GateKind::RY:
            return "ry";
        case GateKind::RZ:
            return "rz";
        case GateKind::CX:
            return "cx";
        case GateKind::CZ:
            return "cz";
        case GateKind::ZZ:
            return "zz";
        case GateKind::U1:
            return "u1";
        case GateKind::U2:
            return "u2";
    }
    return "?";
}

int gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::CX:
        case GateKind::CZ:
        case GateKind::ZZ:
        case GateKind::U2:
            return 2;
        default:
            return 1;
    }
}

bool gate_has_angle(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ || kind == GateKind::ZZ;
}

Gate Gate::single(GateKind kind, Qubit q) {
    return Gate{kind, {q}, 0, {}};
}

Gate Gate::rotation(GateKind kind, double angle, Qubit q) {
    return Gate{kind, {q}, angle, {}};
}

Gate Gate::cx(Qubit control, Qubit target) {
    return Gate{GateKind::CX, {control, target}, 0, {}};
}

Gate Gate::cz(Qubit a, Qubit b) {
    return Gate{GateKind::CZ, {a, b}, 0, {}};
}

Gate Gate::zz(double angle, Qubit a, Qubit b) {
    return Gate{GateKind::ZZ, {a, b}, angle, {}};
}

Gate Gate::u1(ComplexMatrix m, Qubit q) {
    return Gate{GateKind::U1, {q}, 0, std::move(m)};
}

Gate Gate::u2(ComplexMatrix m, Qubit a, Qubit b) {
    return Gate{GateKind::U2, {a, b}, 0, std::move(m)};
}

ComplexMatrix Gate::matrix() const {
    const double h = 1 / std::numbers::sqrt2;
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    const cplx i(0, 1);
    switch (kind) {
        case GateKind::X:
            return pauli(1);
        case GateKind::Y:
            return pauli(2);
        case GateKind::Z:
            return pauli(3);
        case GateKind::H:
            return ComplexMatrix{{h, h}, {h, -h}};
        case GateKind::S:
            return ComplexMatrix{{1, 0}, {0, i}};
        case GateKind::T:
            return ComplexMatrix{{1, 0}, {0, std::polar(1.0, std::numbers::pi / 4)}};
        case GateKind::RX:
            return ComplexMatrix{{c, -i * s}, {-i * s, c}};
        case GateKind::RY:
            return ComplexMatrix{{c, -s}, {s, c}};
        case GateKind::RZ:
            return ComplexMatrix{{std::polar(1.0, -angle / 2), 0}, {0, std::polar(1.0, angle / 2)}};
        case GateKind::CX:
            return ComplexMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
        case GateKind::CZ:
            return ComplexMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}};
        case GateKind::ZZ: {
            const cplx minus = std::polar(1.0, -angle / 2);
            const cplx plus = std::polar(1.0, angle / 2);
            return ComplexMatrix{{minus, 0, 0, 0}, {0, plus, 0, 0}, {0, 0, plus, 0}, {0, 0, 0, minus}};
        }
        case GateKind::U1:
        case GateKind::U2:
            return custom;
    }
    throw std::logic_error("Gate::matrix: unknown kind");
}

Gate Gate::inverse() const {
    switch (kind) {
        case GateKind::X:
        case GateKind::Y:
        case GateKind::Z:
        case GateKind::H:
        case GateKind::CX:
        case GateKind::CZ:
            return *this;
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::ZZ: {
            Gate g = *this;
            g.angle = -angle;
            return g;
        }
        case GateKind::S:
        case GateKind::T:
            return Gate{GateKind::U1, qubits, 0, matrix().adjoint()};
        case GateKind::U1:
        case GateKind::U2:
            return Gate{kind, qubits, 0, custom.adjoint()};
    }
    throw std::logic_error("Gate::inverse: unknown kind");
}

const std::vector<Qubit> &element_qubits(const CircuitElement &e) {
    return std::visit([](const auto &x) -> const std::vector<Qubit> & { return x.qubits; }, e);
}

namespace {

void check_qubits(const std::vector<Qubit> &qubits, std::size_t expected, std::size_t n_qubits, const char *what) {
    if (qubits.size() != expected) {
        throw ValidationError(std::string(what) + ": expected " + std::to_string(expected) + " qubits, got " +
                              std::to_string(qubits.size()));
    }
    for (std::size_t k = 0; k < qubits.size(); k++) {
        if (qubits[k] >= n_qubits) {
            throw ValidationError(std::string(what) + ": qubit " + std::to_string(qubits[k]) + " out of range for " +
                                  std::to_string(n_qubits) + " qubits");
        }
        for (std::size_t j = 0; j < k; j++) {
            if (qubits[j] == qubits[k]) {
                throw ValidationError(std::string(what) + ": duplicate qubit " + std::to_string(qubits[k]));
            }
        }
    }
}

bool is_unitary(const ComplexMatrix &m, double tol) {
    return frobenius_distance(m.adjoint() * m, ComplexMatrix::identity(m.rows())) <= tol;
}

}  // namespace

void NoisyCircuit::validate() const {
    for (const auto &e : elements) {
        if (const auto *g = std::get_if<Gate>(&e)) {
            check_qubits(g->qubits, static_cast<std::size_t>(g->arity()), n_qubits, "gate");
            if (!std::isfinite(g->angle)) {
                throw ValidationError("gate: angle must be finite");
            }
            if (g->kind == GateKind::U1 || g->kind == GateKind::U2) {
                const std::size_t d = g->kind == GateKind::U1 ? 2 : 4;
                if (g->custom.rows() != d || g->custom.cols() != d || !g->custom.all_finite()) {
                    throw ValidationError("gate: custom matrix has the wrong shape");
                }
                if (!is_unitary(g->custom, 1e-8)) {
                    throw ValidationError("gate: custom matrix is not unitary");
                }
            }
        } else {
            const auto &op = std::get<NoiseOp>(e);
            validate_channel(op.channel);
            check_qubits(op.qubits, static_cast<std::size_t>(op.channel.arity), n_qubits, "noise");
        }
    }
}

bool NoisyCircuit::has_noise() const {
    return noise_count() > 0;
}

std::size_t NoisyCircuit::gate_count() const {
    return static_cast<std::size_t>(
        std::count_if(elements.begin(), elements.end(), [](const auto &e) { return std::holds_alternative<Gate>(e); }));
}

std::size_t NoisyCircuit::noise_count() const {
    return elements.size() - gate_count();
}

NoisyCircuit NoisyCircuit::without_noise() const {
    NoisyCircuit out{n_qubits, {}, name};
    for (const auto &e : elements) {
        if (std::holds_alternative<Gate>(e)) {
            out.elements.push_back(e);
        }
    }
    return out;
}

bool NoisyCircuit::same_structure(const NoisyCircuit &other) const {
    return n_qubits == other.n_qubits && elements == other.elements;
}

CircuitStats circuit_stats(const NoisyCircuit &c) {
    CircuitStats stats;
    stats.n_qubits = c.n_qubits;
    for (const auto &e : c.elements) {
        if (std::holds_alternative<Gate>(e)) {
            stats.gate_count++;
            continue;
        }
        const auto &op = std::get<NoiseOp>(e);
        if (op.channel.arity == 1) {
            stats.single_qubit_noise_count++;
        } else {
            stats.two_qubit_noise_count++;
        }
        stats.max_noise_rate = std::max(stats.max_noise_rate, noise_rate(op.channel));
    }
    return stats;
}

std::vector<CircuitElement> append_inverse_and_cancel(const std::vector<CircuitElement> &elements,
                                                      const std::vector<CircuitElement> &appended, std::size_t n_qubits) {
    std::vector<CircuitElement> sequence = elements;
    for (auto it = appended.rbegin(); it != appended.rend(); ++it) {
        if (const auto *g = std::get_if<Gate>(&*it)) {
            sequence.emplace_back(g->inverse());
        }
    }

    // Per-qubit stacks of indices into `kept`; an element is removable when it
    // sits on top of the stacks of all its qubits.
    std::vector<std::vector<std::size_t>> top(n_qubits);
    std::vector<CircuitElement> kept;
    std::vector<bool> alive;
    kept.reserve(sequence.size());
    for (auto &e : sequence) {
        const auto &qs = element_qubits(e);
        if (const auto *g = std::get_if<Gate>(&e)) {
            const std::size_t first = qs.front();
            if (!top[first].empty()) {
                const std::size_t prev = top[first].back();
                const auto *pg = std::get_if<Gate>(&kept[prev]);
                bool adjacent = pg != nullptr && pg->qubits == g->qubits;
                for (Qubit q : qs) {
                    adjacent = adjacent && !top[q].empty() && top[q].back() == prev;
                }
                if (adjacent) {
                    const ComplexMatrix product = g->matrix() * pg->matrix();
                    if (frobenius_distance(product, ComplexMatrix::identity(product.rows())) <= 1e-12) {
                        alive[prev] = false;
                        for (Qubit q : qs) {
                            top[q].pop_back();
                        }
                        continue;
                    }
                }
            }
        }
        for (Qubit q : qs) {
            top[q].push_back(kept.size());
        }
        kept.push_back(std::move(e));
        alive.push_back(true);
    }
    std::vector<CircuitElement> out;
    for (std::size_t k = 0; k < kept.size(); k++) {
        if (alive[k]) {
            out.push_back(std::move(kept[k]));
        }
    }
    return out;
}

ComplexMatrix circuit_unitary(const NoisyCircuit &c) {
    if (c.n_qubits > 12) {
        throw ResourceError("circuit_unitary: at most 12 qubits");
    }
    if (c.has_noise()) {
        throw ValidationError("circuit_unitary: circuit contains noise");
    }
    const std::size_t n = c.n_qubits;
    const std::size_t dim = std::size_t{1} << n;
    ComplexMatrix u = ComplexMatrix::identity(dim);
    for (const auto &e : c.elements) {
        const auto &g = std::get<Gate>(e);
        const ComplexMatrix m = g.matrix();
        const std::size_t d = m.rows();
        std::vector<std::size_t> shifts;
        std::size_t mask = 0;
        for (Qubit q : g.qubits) {
            shifts.push_back(n - 1 - q);
            mask |= std::size_t{1} << (n - 1 - q);
        }
        std::vector<cplx> in(d), out(d);
        for (std::size_t col = 0; col < dim; col++) {
            for (std::size_t base = 0; base < dim; base++) {
                if (base & mask) {
                    continue;
                }
                for (std::size_t local = 0; local < d; local++) {
                    std::size_t idx = base;
                    for (std::size_t k = 0; k < shifts.size(); k++) {
                        if ((local >> (shifts.size() - 1 - k)) & 1) {
                            idx |= std::size_t{1} << shifts[k];
                        }
                    }
                    in[local] = u(idx, col);
                }
                for (std::size_t r = 0; r < d; r++) {
                    cplx acc = 0;
                    for (std::size_t k = 0; k < d; k++) {
                        acc += m(r, k) * in[k];
                    }
                    out[r] = acc;
                }
                for (std::size_t local = 0; local < d; local++) {
                    std::size_t idx = base;
                    for (std::size_t k = 0; k < shifts.size(); k++) {
                        if ((local >> (shifts.size() - 1 - k)) & 1) {
                            idx |= std::size_t{1} << shifts[k];
                        }
                    }
                    u(idx, col) = out[local];
                }
            }
        }
    }
    return u;
}

}  // namespace qnoise
