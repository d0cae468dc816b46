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

#include <gtest/gtest.h>

#include <numbers>
#include <set>

#include "qnoise/circuit.h"
#include "qnoise/circuit_io.h"
#include "qnoise/errors.h"
#include "qnoise/generators.h"
#include "qnoise/noise_policy.h"
#include "test_support.h"

namespace qnoise {
namespace {

using testing::max_abs_diff;
using testing::Sampler;

constexpr double kPi = std::numbers::pi;

// --- gates -------------------------------------------------------------------

TEST(Gates, MatricesAreUnitary) {
    Sampler s(31);
    for (int i = 0; i < 200; i++) {
        const Gate g = testing::random_gate(s, 3);
        const ComplexMatrix u = g.matrix();
        EXPECT_LT(max_abs_diff(u * u.adjoint(), ComplexMatrix::identity(u.rows())), 1e-12) << gate_name(g.kind);
    }
}

TEST(Gates, InverseIsAdjoint) {
    Sampler s(32);
    for (int i = 0; i < 200; i++) {
        const Gate g = testing::random_gate(s, 3);
        const Gate inv = g.inverse();
        EXPECT_EQ(inv.qubits, g.qubits);
        EXPECT_LT(max_abs_diff(inv.matrix(), g.matrix().adjoint()), 1e-12) << gate_name(g.kind);
    }
}

TEST(Gates, KnownMatrices) {
    const double h = 1 / std::numbers::sqrt2;
    EXPECT_LT(max_abs_diff(Gate::single(GateKind::H, 0).matrix(), ComplexMatrix{{h, h}, {h, -h}}), 1e-15);
    EXPECT_LT(max_abs_diff(Gate::rotation(GateKind::RX, kPi, 0).matrix(), ComplexMatrix{{0, cplx(0, -1)}, {cplx(0, -1), 0}}),
              1e-15);
    const ComplexMatrix cx = Gate::cx(0, 1).matrix();
    EXPECT_EQ(cx(2, 3), cplx(1));
    EXPECT_EQ(cx(3, 2), cplx(1));
    EXPECT_EQ(cx(1, 1), cplx(1));
    EXPECT_EQ(Gate::cz(0, 1).matrix()(3, 3), cplx(-1));
    EXPECT_LT(std::abs(Gate::single(GateKind::T, 0).matrix()(1, 1) - std::polar(1.0, kPi / 4)), 1e-15);
}

TEST(Gates, ValidationRejectsBadGates) {
    NoisyCircuit c;
    c.n_qubits = 2;
    c.elements = {Gate::cx(0, 0)};
    EXPECT_THROW(c.validate(), ValidationError);
    c.elements = {Gate::single(GateKind::H, 2)};
    EXPECT_THROW(c.validate(), ValidationError);
    c.elements = {Gate::rotation(GateKind::RZ, std::numeric_limits<double>::infinity(), 0)};
    EXPECT_THROW(c.validate(), ValidationError);
    Gate bad = Gate::single(GateKind::X, 0);
    bad.qubits = {0, 1};
    c.elements = {bad};
    EXPECT_THROW(c.validate(), ValidationError);
    c.elements = {NoiseOp{depolarizing(0.1), {0, 1}}};
    EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Circuit, StatsCountNoises) {
    NoisyCircuit c;
    c.n_qubits = 3;
    c.elements = {Gate::single(GateKind::H, 0), NoiseOp{depolarizing(0.01), {0}}, Gate::cx(0, 1),
                  NoiseOp{two_qubit_depolarizing(0.01), {0, 1}}, NoiseOp{depolarizing(0.03), {2}}};
    const CircuitStats s = circuit_stats(c);
    EXPECT_EQ(s.gate_count, 2u);
    EXPECT_EQ(s.single_qubit_noise_count, 2u);
    EXPECT_EQ(s.two_qubit_noise_count, 1u);
    EXPECT_NEAR(s.max_noise_rate, noise_rate(depolarizing(0.03)), 1e-15);
    EXPECT_FALSE(c.without_noise().has_noise());
    EXPECT_EQ(circuit_stats(c.without_noise()).max_noise_rate, 0.0);
}

TEST(Circuit, AppendInverseCancelsEverything) {
    Sampler s(33);
    for (int i = 0; i < 50; i++) {
        NoisyCircuit c = testing::random_circuit(1000 + i, {.max_qubits = 5, .max_gates = 20, .max_noises = 0});
        const auto out = append_inverse_and_cancel(c.elements, c.elements, c.n_qubits);
        EXPECT_TRUE(out.empty()) << "seed " << 1000 + i << " left " << out.size();
    }
}

TEST(Circuit, AppendInverseKeepsNoiseBarrier) {
    NoisyCircuit c;
    c.n_qubits = 2;
    c.elements = {Gate::single(GateKind::H, 0), Gate::cx(0, 1), NoiseOp{depolarizing(0.1), {1}}};
    const auto ideal = c.without_noise();
    const auto out = append_inverse_and_cancel(c.elements, ideal.elements, 2);
    // The noise on q1 blocks the CX pair; H on q0 is blocked by the CX.
    ASSERT_EQ(out.size(), 5u);
    NoisyCircuit merged;
    merged.n_qubits = 2;
    merged.elements = out;
    EXPECT_EQ(merged.noise_count(), 1u);
}

TEST(Circuit, AppendInverseProductIsIdentity) {
    for (int i = 0; i < 30; i++) {
        NoisyCircuit c = testing::random_circuit(2000 + i, {.max_qubits = 4, .max_gates = 15, .max_noises = 0});
        NoisyCircuit other = testing::random_circuit(3000 + i, {.max_qubits = 4, .max_gates = 15, .max_noises = 0});
        other.n_qubits = c.n_qubits;
        for (auto &e : other.elements) {
            auto &g = std::get<Gate>(e);
            for (auto &q : g.qubits) {
                q %= c.n_qubits;
            }
        }
        other.elements.erase(std::remove_if(other.elements.begin(), other.elements.end(),
                                            [](const CircuitElement &e) {
                                                const auto &q = element_qubits(e);
                                                return q.size() == 2 && q[0] == q[1];
                                            }),
                             other.elements.end());
        NoisyCircuit merged;
        merged.n_qubits = c.n_qubits;
        merged.elements = append_inverse_and_cancel(c.elements, other.elements, c.n_qubits);
        const ComplexMatrix expected = circuit_unitary(other).adjoint() * circuit_unitary(c);
        EXPECT_LT(max_abs_diff(circuit_unitary(merged), expected), 1e-10);
    }
}

TEST(Circuit, UnitaryOrderingQubitZeroIsMsb) {
    NoisyCircuit c;
    c.n_qubits = 2;
    c.elements = {Gate::single(GateKind::X, 0)};
    const ComplexMatrix u = circuit_unitary(c);
    EXPECT_EQ(u(2, 0), cplx(1));  // |00> -> |10>
    c.elements.push_back(NoiseOp{depolarizing(0.1), {0}});
    EXPECT_THROW(circuit_unitary(c), ValidationError);
}

// --- circuit file format -----------------------------------------------------

TEST(CircuitIo, ParsesDocumentedExample) {
    const NoisyCircuit c = parse_circuit(
        "# demo\n"
        "qubits 3\n"
        "h q0\n"
        "rz(pi/4) q1   # trailing comment\n"
        "cx q0 q1\n"
        "u1 q2 [0+0i 1+0i 1+0i 0+0i]\n"
        "noise depolarizing(0.01) q1\n"
        "noise decoherence(200,30,25) q2\n"
        "noise kraus q0 [[1+0i 0+0i 0+0i 1+0i]]\n");
    EXPECT_EQ(c.n_qubits, 3u);
    ASSERT_EQ(c.elements.size(), 7u);
    EXPECT_EQ(std::get<Gate>(c.elements[1]).angle, kPi / 4);
    EXPECT_EQ(std::get<NoiseOp>(c.elements[4]).channel, depolarizing(0.01));
    EXPECT_EQ(std::get<NoiseOp>(c.elements[5]).channel, decoherence(Microseconds{200}, Microseconds{30}, Nanoseconds{25}));
    EXPECT_EQ(std::get<NoiseOp>(c.elements[6]).channel.kraus.size(), 1u);
}

TEST(CircuitIo, AngleForms) {
    const NoisyCircuit c = parse_circuit("qubits 1\nrx(pi) q0\nrx(-pi/2) q0\nrx(0.25*pi) q0\nrx(-1.5e-3) q0\n");
    EXPECT_EQ(std::get<Gate>(c.elements[0]).angle, kPi);
    EXPECT_EQ(std::get<Gate>(c.elements[1]).angle, -kPi / 2);
    EXPECT_EQ(std::get<Gate>(c.elements[2]).angle, 0.25 * kPi);
    EXPECT_EQ(std::get<Gate>(c.elements[3]).angle, -1.5e-3);
}

struct BadInput {
    const char *text;
    std::size_t line;
    std::size_t column;
};

TEST(CircuitIo, ErrorsCarryPositions) {
    const BadInput cases[] = {
        {"h q0\n", 1, 1},
        {"qubits 2\nh q2\n", 2, 3},
        {"qubits 2\nfoo q0\n", 2, 1},
        {"qubits 2\ncx q0 q0\n", 2, 7},
        {"qubits 2\nrz( q0\n", 2, 5},
        {"qubits 2\nh q0 extra\n", 2, 6},
        {"qubits 2\nqubits 3\n", 2, 1},
        {"qubits 1\nu1 q0 [1+0i 1+0i 0+0i 1+0i]\n", 2, 7},
        {"qubits 1\nnoise depolarizing(2) q0\n", 2, 7},
        {"qubits 1\nnoise wobble(1) q0\n", 2, 7},
        {"qubits 1\nnoise kraus q0 [[1+0i 0+0i 0+0i 0.5+0i]]\n", 2, 16},
    };
    for (const auto &bad : cases) {
        try {
            parse_circuit(bad.text);
            ADD_FAILURE() << "accepted: " << bad.text;
        } catch (const ParseError &e) {
            EXPECT_EQ(e.line(), bad.line) << bad.text << " -> " << e.what();
            EXPECT_EQ(e.column(), bad.column) << bad.text << " -> " << e.what();
        }
    }
}

TEST(CircuitIo, RoundTripRandomCircuits) {
    for (std::uint64_t seed = 0; seed < 300; seed++) {
        const NoisyCircuit c = testing::random_circuit(seed, {.max_qubits = 6, .max_gates = 20, .max_noises = 4});
        const std::string text = emit_circuit(c);
        const NoisyCircuit back = parse_circuit(text);
        EXPECT_TRUE(back.same_structure(c)) << text;
        // The leading name comment is not part of the structure.
        EXPECT_EQ(emit_circuit(back), text.substr(text.find("qubits")));
    }
}

TEST(CircuitIo, FuzzedInputsNeverCrash) {
    Sampler s(34);
    const std::string alphabet = "qubitsnoisecxhrzuk0123456789()[]+-*/.,i# \n\tpe";
    for (int i = 0; i < 2000; i++) {
        std::string text = emit_circuit(testing::random_circuit(5000 + i, {.max_qubits = 3, .max_gates = 5, .max_noises = 2}));
        const std::size_t edits = 1 + s.below(4);
        for (std::size_t e = 0; e < edits && !text.empty(); e++) {
            const std::size_t at = s.below(text.size());
            switch (s.below(3)) {
                case 0:
                    text[at] = alphabet[s.below(alphabet.size())];
                    break;
                case 1:
                    text.erase(at, 1 + s.below(3));
                    break;
                default:
                    text.insert(at, 1, alphabet[s.below(alphabet.size())]);
            }
        }
        try {
            const NoisyCircuit c = parse_circuit(text);
            c.validate();
        } catch (const ParseError &e) {
            EXPECT_GE(e.line(), 1u);
            EXPECT_GE(e.column(), 1u);
        }
    }
}

TEST(CircuitIo, ChannelSpecs) {
    EXPECT_EQ(parse_channel_spec("depolarizing2(0.01)"), two_qubit_depolarizing(0.01));
    EXPECT_EQ(parse_channel_spec("zz(-0.05)"), zz_crosstalk(-0.05));
    EXPECT_EQ(parse_channel_spec("amplitude_damping(200,25)"), amplitude_damping(Microseconds{200}, Nanoseconds{25}));
    EXPECT_THROW(parse_channel_spec("depolarizing(0.1"), ParseError);
    EXPECT_THROW(parse_channel_spec("depolarizing(0.1, 0.2)"), ParseError);
}

TEST(CircuitIo, FormatComplex) {
    EXPECT_EQ(format_complex(cplx(1, 0)), "1+0i");
    EXPECT_EQ(format_complex(cplx(0.5, -0.25)), "0.5-0.25i");
    EXPECT_EQ(format_complex(cplx(0, -0.0)), "0-0i");
}

// --- generators --------------------------------------------------------------

TEST(Generators, BvMapsZeroToSecret) {
    const NoisyCircuit c = gen_bv(5, "10110");
    const ComplexMatrix u = circuit_unitary(c);
    // Output index: secret bits (qubit 0 first) followed by ancilla 1.
    const std::size_t out = 0b101101;
    EXPECT_NEAR(std::abs(u(out, 0)), 1.0, 1e-12);
    EXPECT_THROW(gen_bv(3, "10"), ValidationError);
    EXPECT_THROW(gen_bv(3, "10a"), ValidationError);
}

TEST(Generators, QftIsDftUpToPhase) {
    for (std::size_t n : {1u, 2u, 3u, 4u}) {
        const ComplexMatrix u = circuit_unitary(gen_qft(n));
        const std::size_t dim = std::size_t{1} << n;
        const cplx phase = u(0, 0) * std::sqrt(static_cast<double>(dim));
        EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
        for (std::size_t x = 0; x < dim; x++) {
            for (std::size_t y = 0; y < dim; y++) {
                const cplx f = std::polar(1 / std::sqrt(static_cast<double>(dim)),
                                          2 * kPi * static_cast<double>(x * y) / static_cast<double>(dim));
                EXPECT_LT(std::abs(u(x, y) - phase * f), 1e-10) << n << " " << x << " " << y;
            }
        }
    }
}

TEST(Generators, QaoaTwoQubitShape) {
    const NoisyCircuit c = gen_qaoa(2, {{0, 1}}, {0.5}, {0.5});
    ASSERT_EQ(c.elements.size(), 8u);
    EXPECT_EQ(std::get<Gate>(c.elements[0]).kind, GateKind::RY);
    EXPECT_EQ(std::get<Gate>(c.elements[2]).kind, GateKind::RZ);
    EXPECT_EQ(std::get<Gate>(c.elements[4]).kind, GateKind::CZ);
    EXPECT_EQ(std::get<Gate>(c.elements[5]).kind, GateKind::RZ);
    EXPECT_EQ(std::get<Gate>(c.elements[5]).qubits, std::vector<Qubit>{1});
    EXPECT_EQ(std::get<Gate>(c.elements[7]).kind, GateKind::RX);
    EXPECT_THROW(gen_qaoa(2, {{0, 2}}, {0.5}, {0.5}), ValidationError);
    EXPECT_THROW(gen_qaoa(2, {{0, 1}}, {0.5}, {}), ValidationError);
}

TEST(Generators, RandomInstDeterministic) {
    const NoisyCircuit a = gen_random_inst(3, 3, 8, 42);
    const NoisyCircuit b = gen_random_inst(3, 3, 8, 42);
    const NoisyCircuit c = gen_random_inst(3, 3, 8, 43);
    EXPECT_EQ(emit_circuit(a), emit_circuit(b));
    EXPECT_NE(emit_circuit(a), emit_circuit(c));
    EXPECT_EQ(a.n_qubits, 9u);
    EXPECT_NO_THROW(a.validate());
}

TEST(Generators, OutputsRoundTrip) {
    const std::vector<NoisyCircuit> circuits = {gen_bv(8, "10110011"), gen_qft(6), gen_qaoa(6, line_graph(6).edges, {0.3, 0.7}, {0.2, 0.1}),
                                                gen_random_inst(2, 3, 10, 5)};
    for (const auto &c : circuits) {
        EXPECT_TRUE(parse_circuit(emit_circuit(c)).same_structure(c)) << c.name;
    }
}

// --- noise policies ----------------------------------------------------------

TEST(Policy, ParseForms) {
    EXPECT_EQ(parse_noise_policy("explicit").mode, PolicyMode::Explicit);
    const NoisePolicy pg = parse_noise_policy("per-gate:channel=depolarizing(0.01)");
    EXPECT_EQ(pg.mode, PolicyMode::PerGate);
    EXPECT_EQ(pg.channel, depolarizing(0.01));
    const NoisePolicy rk = parse_noise_policy("random-k:20:seed=7");
    EXPECT_EQ(rk.k, 20u);
    EXPECT_EQ(rk.seed, std::optional<std::uint64_t>{7});
    EXPECT_EQ(rk.channel, depolarizing(0.001));
    EXPECT_EQ(parse_noise_policy("crosstalk:seed=3").mode, PolicyMode::CrosstalkLayered);
    EXPECT_THROW(parse_noise_policy("random-k"), ValidationError);
    EXPECT_THROW(parse_noise_policy("per-gate:colour=red"), ValidationError);
    EXPECT_THROW(parse_noise_policy("sometimes"), ValidationError);
}

TEST(Policy, PerGateWidensDepolarizing) {
    const NoisyCircuit c = gen_qaoa(3, {{0, 1}, {1, 2}}, {0.5}, {0.5});
    NoisePolicy p;
    p.mode = PolicyMode::PerGate;
    p.channel = depolarizing(0.01);
    const NoisyCircuit out = apply_noise_policy(c, p);
    const CircuitStats s = circuit_stats(out);
    EXPECT_EQ(s.two_qubit_noise_count, 2u);
    EXPECT_EQ(s.single_qubit_noise_count, c.gate_count() - 2);
    p.channel = amplitude_damping(Microseconds{100}, Nanoseconds{50});
    const CircuitStats s2 = circuit_stats(apply_noise_policy(c, p));
    EXPECT_EQ(s2.two_qubit_noise_count, 0u);
    EXPECT_EQ(s2.single_qubit_noise_count, c.gate_count() + 2);
}

TEST(Policy, RandomKDeterministicAndDistinct) {
    std::vector<std::pair<Qubit, Qubit>> edges = line_graph(100).edges;
    const NoisyCircuit c = gen_qaoa(100, edges, {0.5}, {0.5});
    const NoisePolicy p = parse_noise_policy("random-k:20:seed=7");
    const std::string a = emit_circuit(apply_noise_policy(c, p));
    const std::string b = emit_circuit(apply_noise_policy(c, p));
    EXPECT_EQ(a, b);
    EXPECT_EQ(circuit_stats(parse_circuit(a)).single_qubit_noise_count, 20u);
    NoisePolicy unseeded = p;
    unseeded.seed.reset();
    EXPECT_THROW(apply_noise_policy(c, unseeded), ValidationError);
    NoisePolicy too_many = p;
    too_many.k = c.gate_count() + 1;
    EXPECT_THROW(apply_noise_policy(c, too_many), ValidationError);
}

TEST(Policy, CrosstalkAnglesInRangeAndStable) {
    const NoisyCircuit c = gen_qaoa(10, line_graph(10).edges, {0.5}, {0.5});
    NoisePolicy p = parse_noise_policy("crosstalk:seed=11");
    p.graph = line_graph(10);
    const NoisyCircuit out = apply_noise_policy(c, p);
    EXPECT_EQ(emit_circuit(out), emit_circuit(apply_noise_policy(c, p)));
    std::size_t zz = 0;
    for (const auto &e : out.elements) {
        if (const auto *op = std::get_if<NoiseOp>(&e)) {
            zz++;
            const cplx phase = op->channel.kraus[0](0, 0);
            const double theta = -2 * std::arg(phase);
            EXPECT_GE(theta, -0.1 - 1e-12);
            EXPECT_LE(theta, 0.1 + 1e-12);
        }
    }
    EXPECT_GT(zz, 0u);
    p.graph = line_graph(9);
    EXPECT_THROW(apply_noise_policy(c, p), ValidationError);
}

TEST(Policy, GreedyLayersCoverCircuit) {
    const NoisyCircuit c = gen_qft(4);
    const auto layers = greedy_layers(c);
    std::size_t next = 0;
    for (const auto &[b, e] : layers) {
        EXPECT_EQ(b, next);
        EXPECT_LT(b, e);
        std::set<Qubit> busy;
        for (std::size_t i = b; i < e; i++) {
            for (Qubit q : element_qubits(c.elements[i])) {
                EXPECT_TRUE(busy.insert(q).second);
            }
        }
        next = e;
    }
    EXPECT_EQ(next, c.elements.size());
}

TEST(Policy, CouplingGraphFile) {
    const CouplingGraph g = parse_coupling_graph("# ring\nqubits 3\nedge 0 1\nedge 1 2\nedge 2 0\n");
    EXPECT_EQ(g.edges.size(), 3u);
    EXPECT_EQ(parse_coupling_graph(emit_coupling_graph(g)).edges, g.edges);
    try {
        parse_coupling_graph("qubits 3\nedge 0 5\n");
        ADD_FAILURE();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 8u);
    }
}

}  // namespace
}  // namespace qnoise
