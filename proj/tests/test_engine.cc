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

#include <cstring>

#include "qnoise/engine.h"
#include "qnoise/errors.h"
#include "qnoise/generators.h"
#include "qnoise/noise_policy.h"
#include "qnoise/oracles.h"
#include "test_support.h"

namespace qnoise {
namespace {

using testing::random_circuit;
using testing::Sampler;

StateSpec random_product(Sampler &s, std::size_t n) {
    return StateSpec::product(testing::random_product_string(s, n));
}

std::size_t noise_count(const NoisyCircuit &c) {
    std::size_t k = 0;
    for (const auto &e : c.elements) {
        k += std::holds_alternative<NoiseOp>(e) ? 1 : 0;
    }
    return k;
}

TEST(Bounds, FrozenValues) {
    // Computed with exact rational arithmetic.
    struct Case {
        BoundParams bp;
        double refined, loose;
    } cases[] = {
        {{20, 0, 0.002, 1}, 0.014726824433937665, 0.41612113210869384},
        {{20, 0, 0.001, 1}, 0.003345905502342668, 0.07127288927498121},
        {{20, 0, 0.001, 2}, 7.942241306367692e-05, 0.006546659693251756},
        {{5, 3, 0.01, 2}, 0.0417104638181376, 0.5746544842113024},
        {{10, 10, 0.001, 0}, 0.264132506647892, 0.5039166343739098},
    };
    for (const auto &c : cases) {
        EXPECT_NEAR(error_bound(c.bp, true), c.refined, 1e-12 * c.refined);
        EXPECT_NEAR(error_bound(c.bp, false), c.loose, 1e-12 * c.loose);
    }
}

TEST(Bounds, DecreaseInLevelAndVanishAtFull) {
    for (std::size_t n1 : {0u, 3u, 12u}) {
        for (std::size_t n2 : {0u, 2u, 5u}) {
            const std::size_t n = n1 + n2;
            double prev = std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < n; l++) {
                const double b = error_bound({n1, n2, 0.003, l}, true);
                EXPECT_LT(b, prev);
                EXPECT_LE(b, error_bound({n1, n2, 0.003, l}, false) + 1e-15);
                prev = b;
            }
            EXPECT_EQ(error_bound({n1, n2, 0.003, n}, true), 0.0);
            EXPECT_EQ(error_bound({n1, n2, 0.003, n + 3}, false), 0.0);
        }
    }
}

TEST(TermCount, KnownValues) {
    EXPECT_EQ(term_count(20, 0, 1), 122u);
    EXPECT_EQ(term_count(2, 1, 1), 44u);
    EXPECT_EQ(term_count(7, 4, 0), 2u);
    EXPECT_EQ(term_count(0, 0, 5), 2u);
    // Full level: 2 * 4^n1 * 16^n2.
    EXPECT_EQ(term_count(3, 2, 5), 2u * 64u * 256u);
    EXPECT_THROW(term_count(200, 200, 200), ResourceError);
}

TEST(StateSpecs, ParseAndValidate) {
    EXPECT_TRUE(StateSpec::parse("ideal").ideal_output);
    const StateSpec s = StateSpec::parse("0+1r");
    ASSERT_EQ(s.terms.size(), 1u);
    EXPECT_EQ(s.terms[0].second.qubits, "0+1r");
    EXPECT_THROW(StateSpec::parse("01q"), ValidationError);
    EXPECT_THROW(s.validate(3, true), ValidationError);
    EXPECT_NO_THROW(s.validate(4, false));
    EXPECT_THROW(StateSpec::ideal().validate(4, false), ValidationError);
    EXPECT_THROW(StateSpec{}.validate(0, true), ValidationError);
}

TEST(Engine, ExactMatchesDenseOracle) {
    for (std::uint64_t seed = 0; seed < 60; seed++) {
        const NoisyCircuit c = random_circuit(seed);
        Sampler s(seed + 500);
        const StateSpec psi = random_product(s, c.n_qubits);
        const StateSpec v = s.coin() ? StateSpec::ideal() : random_product(s, c.n_qubits);
        const double oracle = dense_simulate(c, psi, v);
        EXPECT_NEAR(simulate_exact(c, psi, v), oracle, 1e-10) << "seed " << seed;
    }
}

TEST(Engine, FullLevelEqualsExact) {
    for (std::uint64_t seed = 100; seed < 130; seed++) {
        const NoisyCircuit c = random_circuit(seed, {.max_qubits = 5, .max_gates = 15, .max_noises = 3});
        Sampler s(seed);
        const StateSpec psi = random_product(s, c.n_qubits);
        const StateSpec v = random_product(s, c.n_qubits);
        const double exact = simulate_exact(c, psi, v);
        const ApproxReport r = simulate_approx(c, psi, v, noise_count(c));
        EXPECT_NEAR(r.value, exact, 1e-10) << "seed " << seed;
        EXPECT_EQ(r.bound, 0.0);
        EXPECT_EQ(r.level_sums.size(), noise_count(c) + 1);
    }
}

TEST(Engine, ApproximationWithinBound) {
    int checked = 0;
    for (std::uint64_t seed = 200; seed < 260; seed++) {
        const NoisyCircuit c = random_circuit(seed, {.max_qubits = 5, .max_gates = 15, .max_noises = 4});
        const std::size_t n = noise_count(c);
        Sampler s(seed);
        const StateSpec psi = random_product(s, c.n_qubits);
        const StateSpec v = StateSpec::ideal();
        const double exact = simulate_exact(c, psi, v);
        for (std::size_t l = 0; l < n; l++) {
            const ApproxReport r = simulate_approx(c, psi, v, l);
            EXPECT_LE(std::abs(r.value - exact), r.bound + 1e-12) << "seed " << seed << " level " << l;
            EXPECT_LE(r.bound, r.bound_loose + 1e-15);
            checked++;
        }
    }
    EXPECT_GT(checked, 50);
}

TEST(Engine, ContractionCountMatchesTermCount) {
    const NoisyCircuit base = gen_qaoa(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}, {0.4}, {0.7});
    const NoisyCircuit c = apply_noise_policy(base, parse_noise_policy("random-k:5:seed=3"));
    for (std::size_t l = 0; l <= 3; l++) {
        const ApproxReport r = simulate_approx(c, StateSpec::product("000000"), StateSpec::ideal(), l);
        EXPECT_EQ(r.contraction_count, term_count(r.n1, r.n2, l));
        EXPECT_EQ(r.n1 + r.n2, 5u);
    }
}

TEST(Engine, ParallelSumIsBitIdentical) {
    const NoisyCircuit c = random_circuit(7, {.max_qubits = 5, .max_gates = 20, .max_noises = 4, .exact_noise_count = true});
    const StateSpec psi = StateSpec::product(std::string(c.n_qubits, '+'));
    EngineOptions serial;
    serial.workers = 1;
    EngineOptions parallel;
    parallel.workers = 4;
    for (std::size_t l = 0; l <= 2; l++) {
        const double a = simulate_approx(c, psi, StateSpec::ideal(), l, serial).value;
        const double b = simulate_approx(c, psi, StateSpec::ideal(), l, parallel).value;
        EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0) << a << " vs " << b;
    }
}

TEST(Engine, DensityMatrixEntriesMatchDense) {
    for (std::uint64_t seed = 300; seed < 310; seed++) {
        const NoisyCircuit c = random_circuit(seed, {.max_qubits = 3, .max_gates = 10, .max_noises = 3});
        Sampler s(seed);
        const StateSpec psi = random_product(s, c.n_qubits);
        const DenseState rho = dense_evolve(c, psi);
        const std::size_t dim = std::size_t{1} << c.n_qubits;
        for (std::size_t x = 0; x < dim; x++) {
            for (std::size_t y = 0; y < dim; y++) {
                std::string xs, ys;
                for (std::size_t q = 0; q < c.n_qubits; q++) {
                    xs.push_back(((x >> (c.n_qubits - 1 - q)) & 1) ? '1' : '0');
                    ys.push_back(((y >> (c.n_qubits - 1 - q)) & 1) ? '1' : '0');
                }
                const cplx got = density_matrix_entry(c, psi, xs, ys);
                EXPECT_LT(std::abs(got - rho.rho(x, y)), 1e-10) << "seed " << seed;
            }
        }
    }
}

TEST(Engine, SuperposedInputMatchesDense) {
    const NoisyCircuit c = random_circuit(11, {.max_qubits = 3, .max_gates = 10, .max_noises = 2});
    StateSpec psi;
    psi.terms.emplace_back(cplx(0.6, 0), ProductState{std::string(c.n_qubits, '0')});
    psi.terms.emplace_back(cplx(0, 0.8), ProductState{std::string(c.n_qubits, '1')});
    const StateSpec v = StateSpec::product(std::string(c.n_qubits, '+'));
    EXPECT_NEAR(simulate_exact(c, psi, v), dense_simulate(c, psi, v), 1e-10);
}

TEST(Fidelity, SingleDepolarizing) {
    for (double p : {0.0, 0.01, 0.2}) {
        NoisyCircuit ideal;
        ideal.n_qubits = 1;
        ideal.elements = {Gate::single(GateKind::H, 0)};
        NoisyCircuit noisy = ideal;
        noisy.elements.push_back(NoiseOp{depolarizing(p), {0}});
        EXPECT_NEAR(fidelity_exact(ideal, noisy), 1 - p, 1e-12);
        EXPECT_NEAR(fidelity_approx(ideal, noisy, 1).value, 1 - p, 1e-12);
    }
}

TEST(Fidelity, ExactMatchesDenseAndApproxWithinBound) {
    for (std::uint64_t seed = 400; seed < 420; seed++) {
        NoisyCircuit noisy = random_circuit(seed, {.max_qubits = 4, .max_gates = 12, .max_noises = 3});
        NoisyCircuit ideal = noisy;
        std::erase_if(ideal.elements, [](const CircuitElement &e) { return std::holds_alternative<NoiseOp>(e); });
        const double exact = fidelity_exact(ideal, noisy);
        EXPECT_NEAR(exact, dense_fidelity(ideal, noisy), 1e-10) << "seed " << seed;
        for (std::size_t l = 0; l <= noise_count(noisy); l++) {
            const ApproxReport r = fidelity_approx(ideal, noisy, l);
            EXPECT_LE(std::abs(r.value - exact), r.bound + 1e-12) << "seed " << seed << " level " << l;
        }
    }
}

TEST(Engine, RejectsMismatchedStates) {
    const NoisyCircuit c = gen_qft(3);
    EXPECT_THROW(simulate_exact(c, StateSpec::product("00"), StateSpec::ideal()), ValidationError);
    EXPECT_THROW(simulate_exact(c, StateSpec::ideal(), StateSpec::ideal()), ValidationError);
    EXPECT_THROW(simulate_approx(c, StateSpec::product("000"), StateSpec::product("0000"), 1), ValidationError);
}

TEST(Engine, MemoryBudgetSurfacesAsResourceError) {
    const NoisyCircuit c = gen_qft(8);
    EngineOptions tight;
    tight.contraction.memory_budget = 8;
    EXPECT_THROW(simulate_exact(c, StateSpec::product("00000000"), StateSpec::product("0+1-0+1-"), tight), ResourceError);
}

}  // namespace
}  // namespace qnoise
