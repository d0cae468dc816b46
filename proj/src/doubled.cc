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

#include <cmath>
#include <numbers>

#include "qnoise/errors.h"
#include "qnoise/tensornet.h"

namespace qnoise {

std::array<cplx, 2> ProductState::amplitudes(char c) {
    const double h = 1 / std::numbers::sqrt2;
    switch (c) {
        case '0':
            return {1, 0};
        case '1':
            return {0, 1};
        case '+':
            return {h, h};
        case '-':
            return {h, -h};
        case 'r':
            return {h, cplx(0, h)};
        case 'l':
            return {h, cplx(0, -h)};
        default:
            throw ValidationError(std::string("unknown single-qubit state '") + c + "' (use 0 1 + - r l)");
    }
}

void ProductState::validate() const {
    for (char c : qubits) {
        amplitudes(c);
    }
}

namespace {

class WireBuilder {
   public:
    WireBuilder(SlottedNetwork &out, std::size_t n) : out_(out), seg_(n, 0) {
        for (std::size_t q = 0; q < n; q++) {
            ket_.push_back(out_.net.new_axis("k" + std::to_string(q) + ".0"));
            bra_.push_back(out_.net.new_axis("b" + std::to_string(q) + ".0"));
        }
        ket_start_ = ket_;
        bra_start_ = bra_;
    }

    Axis ket(Qubit q) const { return ket_[q]; }
    Axis bra(Qubit q) const { return bra_[q]; }
    Axis ket_start(Qubit q) const { return ket_start_[q]; }
    Axis bra_start(Qubit q) const { return bra_start_[q]; }

    void add_element(const CircuitElement &e) {
        const auto &qs = element_qubits(e);
        std::vector<Axis> k_in, b_in, k_out, b_out;
        for (Qubit q : qs) {
            k_in.push_back(ket_[q]);
            b_in.push_back(bra_[q]);
            seg_[q]++;
            ket_[q] = out_.net.new_axis("k" + std::to_string(q) + "." + std::to_string(seg_[q]));
            bra_[q] = out_.net.new_axis("b" + std::to_string(q) + "." + std::to_string(seg_[q]));
            k_out.push_back(ket_[q]);
            b_out.push_back(bra_[q]);
        }
        if (const auto *g = std::get_if<Gate>(&e)) {
            const ComplexMatrix u = g->matrix();
            Tensor kt{concat(k_out, k_in), u.entries(), Side::Ket};
            Tensor bt{concat(b_out, b_in), u.conjugate().entries(), Side::Bra};
            out_.net.add_tensor(std::move(kt));
            out_.net.add_tensor(std::move(bt));
            return;
        }
        const auto &op = std::get<NoiseOp>(e);
        NoiseSlot slot;
        slot.id = out_.slots.size();
        slot.arity = op.channel.arity;
        slot.ket_out = k_out;
        slot.bra_out = b_out;
        slot.ket_in = k_in;
        slot.bra_in = b_in;
        std::vector<Axis> axes = concat(k_out, b_out);
        axes = concat(axes, concat(k_in, b_in));
        slot.tensor = out_.net.add_tensor(Tensor{std::move(axes), matrix_rep(op.channel).matrix.entries(), Side::Bridge});
        out_.slots.push_back(std::move(slot));
    }

   private:
    static std::vector<Axis> concat(const std::vector<Axis> &a, const std::vector<Axis> &b) {
        std::vector<Axis> out = a;
        out.insert(out.end(), b.begin(), b.end());
        return out;
    }

    SlottedNetwork &out_;
    std::vector<std::size_t> seg_;
    std::vector<Axis> ket_, bra_, ket_start_, bra_start_;
};

void check_state(const ProductState &s, std::size_t n, const char *what) {
    if (s.qubits.size() != n) {
        throw ValidationError(std::string(what) + ": expected " + std::to_string(n) + " qubit states, got " +
                              std::to_string(s.qubits.size()));
    }
    s.validate();
}

Tensor vector_tensor(Axis a, const std::array<cplx, 2> &amp, bool conjugate, Side side) {
    if (conjugate) {
        return Tensor{{a}, {std::conj(amp[0]), std::conj(amp[1])}, side};
    }
    return Tensor{{a}, {amp[0], amp[1]}, side};
}

}  // namespace

SlottedNetwork build_doubled_network(const NoisyCircuit &c, const DoubledBoundary &boundary, bool append_inverse_ideal) {
    c.validate();
    const std::size_t n = c.n_qubits;
    check_state(boundary.ket_in, n, "ket input state");
    check_state(boundary.ket_out, n, "ket output state");
    check_state(boundary.bra_in, n, "bra input state");
    check_state(boundary.bra_out, n, "bra output state");
    const std::vector<CircuitElement> elements =
        append_inverse_ideal ? append_inverse_and_cancel(c.elements, c.without_noise().elements, n) : c.elements;

    SlottedNetwork out;
    WireBuilder wires(out, n);
    for (Qubit q = 0; q < n; q++) {
        out.ket_in.push_back(out.net.add_tensor(
            vector_tensor(wires.ket(q), ProductState::amplitudes(boundary.ket_in.qubits[q]), false, Side::Ket)));
        out.bra_in.push_back(out.net.add_tensor(
            vector_tensor(wires.bra(q), ProductState::amplitudes(boundary.bra_in.qubits[q]), true, Side::Bra)));
    }
    for (const auto &e : elements) {
        wires.add_element(e);
    }
    for (Qubit q = 0; q < n; q++) {
        out.ket_out.push_back(out.net.add_tensor(
            vector_tensor(wires.ket(q), ProductState::amplitudes(boundary.ket_out.qubits[q]), true, Side::Ket)));
        out.bra_out.push_back(out.net.add_tensor(
            vector_tensor(wires.bra(q), ProductState::amplitudes(boundary.bra_out.qubits[q]), false, Side::Bra)));
    }
    return out;
}

SlottedNetwork build_fidelity_network(const NoisyCircuit &ideal, const NoisyCircuit &noisy) {
    if (ideal.n_qubits != noisy.n_qubits) {
        throw ValidationError("fidelity network: ideal circuit has " + std::to_string(ideal.n_qubits) +
                              " qubits, noisy circuit has " + std::to_string(noisy.n_qubits));
    }
    if (ideal.has_noise()) {
        throw ValidationError("fidelity network: the ideal circuit contains noise");
    }
    ideal.validate();
    noisy.validate();
    const std::size_t n = noisy.n_qubits;
    const auto elements = append_inverse_and_cancel(noisy.elements, ideal.elements, n);

    SlottedNetwork out;
    WireBuilder wires(out, n);
    for (const auto &e : elements) {
        wires.add_element(e);
    }
    for (Qubit q = 0; q < n; q++) {
        for (const bool ket : {true, false}) {
            const Axis end = ket ? wires.ket(q) : wires.bra(q);
            const Axis start = ket ? wires.ket_start(q) : wires.bra_start(q);
            const Side side = ket ? Side::Ket : Side::Bra;
            if (end == start) {
                out.net.add_tensor(Tensor{{}, {2.0}, Side::Scalar});
            } else {
                out.net.add_tensor(Tensor{{end, start}, {1, 0, 0, 1}, side});
            }
        }
    }
    return out;
}

void substitute_in_place(SlottedNetwork &net, std::size_t slot_index, const FactorTerm &factor) {
    if (slot_index >= net.slots.size()) {
        throw ValidationError("substitute: no slot " + std::to_string(slot_index));
    }
    NoiseSlot &slot = net.slots[slot_index];
    if (slot.substituted) {
        throw ValidationError("substitute: slot " + std::to_string(slot_index) + " is already substituted");
    }
    const std::size_t d = std::size_t{1} << slot.arity;
    for (const ComplexMatrix *m : {&factor.ket, &factor.bra}) {
        if (m->rows() != d || m->cols() != d) {
            throw ValidationError("substitute: factor must be " + std::to_string(d) + "x" + std::to_string(d));
        }
    }
    std::vector<Axis> ket_axes = slot.ket_out;
    ket_axes.insert(ket_axes.end(), slot.ket_in.begin(), slot.ket_in.end());
    std::vector<Axis> bra_axes = slot.bra_out;
    bra_axes.insert(bra_axes.end(), slot.bra_in.begin(), slot.bra_in.end());
    net.net.tensors()[slot.tensor] = Tensor{std::move(ket_axes), factor.ket.entries(), Side::Ket};
    slot.bra_tensor = net.net.add_tensor(Tensor{std::move(bra_axes), factor.bra.entries(), Side::Bra});
    slot.substituted = true;
}

SlottedNetwork substitute(SlottedNetwork net, std::size_t slot, const FactorTerm &factor) {
    substitute_in_place(net, slot, factor);
    return net;
}

}  // namespace qnoise
