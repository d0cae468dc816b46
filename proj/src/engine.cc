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

#include "qnoise/engine.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <thread>

#include "qnoise/errors.h"

namespace qnoise {

namespace {

constexpr double kImagTolerance = 1e-9;

}  // namespace

StateSpec StateSpec::product(std::string qubits) {
    StateSpec s;
    s.terms.emplace_back(1.0, ProductState{std::move(qubits)});
    return s;
}

StateSpec StateSpec::ideal() {
    StateSpec s;
    s.ideal_output = true;
    return s;
}

StateSpec StateSpec::parse(std::string_view text) {
    if (text == "ideal") {
        return ideal();
    }
    StateSpec s = product(std::string(text));
    s.terms[0].second.validate();
    return s;
}

void StateSpec::validate(std::size_t n_qubits, bool allow_ideal) const {
    if (ideal_output) {
        if (!allow_ideal) {
            throw ValidationError("'ideal' is only valid as an output state");
        }
        return;
    }
    if (terms.empty()) {
        throw ValidationError("state has no terms");
    }
    for (const auto &[coef, state] : terms) {
        if (state.qubits.size() != n_qubits) {
            throw ValidationError("state '" + state.qubits + "' has " + std::to_string(state.qubits.size()) +
                                  " qubits, circuit has " + std::to_string(n_qubits));
        }
        state.validate();
        if (!std::isfinite(coef.real()) || !std::isfinite(coef.imag())) {
            throw ValidationError("state coefficients must be finite");
        }
    }
}

std::size_t effective_workers(std::size_t requested) {
    if (requested > 0) {
        return requested;
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// --- Bounds and counts ------------------------------------------------------

namespace {

double log_choose(std::size_t n, std::size_t k) {
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
           std::lgamma(static_cast<double>(n - k) + 1);
}

// k * log(x) with the convention 0 * log(0) = 0.
double log_pow(double x, std::size_t k) {
    return k == 0 ? 0.0 : static_cast<double>(k) * std::log(x);
}

}  // namespace

double error_bound(const BoundParams &bp, bool refined) {
    const std::size_t n = bp.n1 + bp.n2;
    if (bp.level >= n) {
        return 0;
    }
    const double p = bp.p;
    double total = 0;
    for (std::size_t u = bp.level + 1; u <= n; u++) {
        if (!refined) {
            total += std::exp(log_choose(n, u) + log_pow(16 * p, u) + log_pow(1 + 16 * p, n - u));
            continue;
        }
        const std::size_t lo = u > bp.n2 ? u - bp.n2 : 0;
        const std::size_t hi = std::min(u, bp.n1);
        for (std::size_t i = lo; i <= hi; i++) {
            const std::size_t j = u - i;
            total += std::exp(log_choose(bp.n1, i) + log_choose(bp.n2, j) + log_pow(4 * p, i) + log_pow(16 * p, j) +
                              log_pow(1 + 4 * p, bp.n1 - i) + log_pow(1 + 16 * p, bp.n2 - j));
        }
    }
    return total;
}

namespace {

using u128 = unsigned __int128;

u128 checked_mul(u128 a, u128 b) {
    if (a != 0 && b > ~u128{0} / a) {
        throw ResourceError("term count overflows");
    }
    return a * b;
}

u128 choose_exact(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    u128 r = 1;
    for (std::size_t i = 1; i <= k; i++) {
        // r * (n - k + i) is divisible by i at every step.
        r = checked_mul(r, n - k + i) / i;
    }
    return r;
}

u128 power_exact(u128 base, std::size_t e) {
    u128 r = 1;
    for (std::size_t i = 0; i < e; i++) {
        r = checked_mul(r, base);
    }
    return r;
}

}  // namespace

std::uint64_t term_count(std::size_t n1, std::size_t n2, std::size_t level) {
    u128 total = 0;
    const std::size_t top = std::min(level, n1 + n2);
    for (std::size_t u = 0; u <= top; u++) {
        const std::size_t lo = u > n2 ? u - n2 : 0;
        const std::size_t hi = std::min(u, n1);
        for (std::size_t i = lo; i <= hi; i++) {
            const u128 t = checked_mul(checked_mul(choose_exact(n1, i), choose_exact(n2, u - i)),
                                       checked_mul(power_exact(3, i), power_exact(15, u - i)));
            total += t;
            if (total > std::numeric_limits<std::uint64_t>::max() / 2) {
                throw ResourceError("term count overflows");
            }
        }
    }
    return static_cast<std::uint64_t>(2 * total);
}

// --- Networks with swappable leaves ----------------------------------------

namespace {

/// Boundary vectors of one kind (e.g. every ket input), one tensor per
/// qubit, taking the states of a superposition in turn.
struct BoundaryGroup {
    const std::vector<std::size_t> *tensors = nullptr;
    const std::vector<std::pair<cplx, ProductState>> *terms = nullptr;
    bool conjugate = false;
};

/// A closed (sub)network planned once; tensor data can be swapped per call.
class PlannedNetwork {
   public:
    PlannedNetwork(const Network &net, const std::vector<std::size_t> &members, const std::vector<BoundaryGroup> &groups,
                   const ContractOptions &options) {
        std::vector<std::size_t> leaf_of(net.tensors().size(), SIZE_MAX);
        std::vector<std::vector<Axis>> leaves;
        for (std::size_t t : members) {
            leaf_of[t] = leaves.size();
            leaves.push_back(net.tensors()[t].axes);
            base_.push_back(&net.tensors()[t].data);
        }
        leaf_of_ = leaf_of;
        plan_ = ContractionPlan::build(leaves, options, [&](Axis a) { return net.axis_name(a); });

        // Cartesian product of the groups' superposition terms.
        variants_.push_back(Variant{1.0, {}});
        for (const auto &g : groups) {
            std::vector<Variant> next;
            for (const auto &v : variants_) {
                for (const auto &[coef, state] : *g.terms) {
                    Variant w = v;
                    w.coef *= g.conjugate ? std::conj(coef) : coef;
                    for (std::size_t q = 0; q < g.tensors->size(); q++) {
                        auto amp = ProductState::amplitudes(state.qubits[q]);
                        if (g.conjugate) {
                            amp = {std::conj(amp[0]), std::conj(amp[1])};
                        }
                        storage_.push_back(std::make_unique<std::vector<cplx>>(std::vector<cplx>{amp[0], amp[1]}));
                        w.overrides.emplace_back(leaf_of[(*g.tensors)[q]], storage_.back().get());
                    }
                    next.push_back(std::move(w));
                }
            }
            variants_ = std::move(next);
        }
    }

    std::size_t leaf(std::size_t tensor) const { return leaf_of_.at(tensor); }
    std::size_t variant_count() const { return variants_.size(); }

    /// Sum over boundary variants, with `swaps` replacing leaf data.
    cplx evaluate(const std::vector<std::pair<std::size_t, const std::vector<cplx> *>> &swaps) const {
        std::vector<const std::vector<cplx> *> ptrs = base_;
        for (const auto &[leaf, data] : swaps) {
            ptrs[leaf] = data;
        }
        cplx total = 0;
        for (const auto &v : variants_) {
            for (const auto &[leaf, data] : v.overrides) {
                ptrs[leaf] = data;
            }
            total += v.coef * plan_.execute(ptrs);
        }
        return total;
    }

   private:
    struct Variant {
        cplx coef;
        std::vector<std::pair<std::size_t, const std::vector<cplx> *>> overrides;
    };

    ContractionPlan plan_;
    std::vector<const std::vector<cplx> *> base_;
    std::vector<std::size_t> leaf_of_;
    std::vector<Variant> variants_;
    std::vector<std::unique_ptr<std::vector<cplx>>> storage_;
};

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)> &body) {
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; i++) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; w++) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) {
                    return;
                }
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next.store(count);
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::vector<std::size_t> tensors_on(const Network &net, std::initializer_list<Side> sides) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < net.tensors().size(); i++) {
        if (std::find(sides.begin(), sides.end(), net.tensors()[i].side) != sides.end()) {
            out.push_back(i);
        }
    }
    return out;
}

struct Boundary {
    std::vector<std::pair<cplx, ProductState>> psi;
    std::vector<std::pair<cplx, ProductState>> v;
    bool ideal = false;
};

Boundary resolve_boundary(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v) {
    psi.validate(c.n_qubits, false);
    v.validate(c.n_qubits, true);
    Boundary b;
    b.psi = psi.terms;
    b.ideal = v.ideal_output;
    b.v = v.ideal_output ? psi.terms : v.terms;
    return b;
}

DoubledBoundary first_terms(const Boundary &b) {
    return DoubledBoundary::same(b.psi.front().second, b.v.front().second);
}

void note_imag(double imag, const std::string &what, ApproxReport *report, const EngineOptions &options) {
    if (std::abs(imag) <= kImagTolerance) {
        return;
    }
    const std::string msg = what + " has imaginary residue " + format_double(imag);
    if (report != nullptr) {
        report->warnings.push_back(msg);
    }
    if (options.warn) {
        options.warn(msg);
    }
}

/// Shared driver for simulate_approx and fidelity_approx. `net` has every
/// slot unsubstituted.
ApproxReport run_approx(SlottedNetwork net, const std::vector<BoundaryGroup> &ket_groups,
                        const std::vector<BoundaryGroup> &bra_groups, double scale, const CircuitStats &stats,
                        std::size_t level, const EngineOptions &options) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n_slots = net.slots.size();
    if (level > n_slots) {
        throw ValidationError("level " + std::to_string(level) + " exceeds the noise count " + std::to_string(n_slots));
    }

    ApproxReport report;
    report.level = level;
    report.n1 = stats.single_qubit_noise_count;
    report.n2 = stats.two_qubit_noise_count;
    report.p = stats.max_noise_rate;
    report.bound = error_bound({report.n1, report.n2, report.p, level}, true);
    report.bound_loose = error_bound({report.n1, report.n2, report.p, level}, false);
    report.contraction_count = term_count(report.n1, report.n2, level);
    report.workers = effective_workers(options.workers);

    // Decompose each slot's channel; identical super-operators share one SVD.
    std::vector<std::vector<cplx>> seen;
    std::vector<std::shared_ptr<const FactorDecomposition>> unique_decs;
    std::vector<std::shared_ptr<const FactorDecomposition>> decs(n_slots);
    for (std::size_t s = 0; s < n_slots; s++) {
        const auto &data = net.net.tensors()[net.slots[s].tensor].data;
        const auto it = std::find(seen.begin(), seen.end(), data);
        if (it != seen.end()) {
            decs[s] = unique_decs[static_cast<std::size_t>(it - seen.begin())];
            continue;
        }
        const std::size_t d = std::size_t{1} << (2 * net.slots[s].arity);
        auto dec = std::make_shared<FactorDecomposition>(
            decompose(SuperOpMatrix{net.slots[s].arity, ComplexMatrix(d, d, data)}));
        if (dec->terms.empty()) {
            throw ValidationError("noise channel has a zero super-operator");
        }
        seen.push_back(data);
        unique_decs.push_back(dec);
        decs[s] = dec;
    }

    // Factor data in tensor layout: ket factor over (out..., in...), likewise bra.
    std::vector<std::vector<std::vector<cplx>>> ket_data(n_slots), bra_data(n_slots);
    for (std::size_t s = 0; s < n_slots; s++) {
        for (const auto &term : decs[s]->terms) {
            ket_data[s].push_back(term.ket.entries());
            bra_data[s].push_back(term.bra.entries());
        }
        substitute_in_place(net, s, decs[s]->terms.front());
    }

    cplx constant = scale;
    for (std::size_t t : tensors_on(net.net, {Side::Scalar})) {
        constant *= net.net.tensors()[t].data[0];
    }
    const PlannedNetwork ket(net.net, tensors_on(net.net, {Side::Ket}), ket_groups, options.contraction);
    const PlannedNetwork bra(net.net, tensors_on(net.net, {Side::Bra}), bra_groups, options.contraction);
    std::vector<std::size_t> ket_leaf(n_slots), bra_leaf(n_slots);
    for (std::size_t s = 0; s < n_slots; s++) {
        ket_leaf[s] = ket.leaf(net.slots[s].tensor);
        bra_leaf[s] = bra.leaf(net.slots[s].bra_tensor);
    }

    // Patterns level by level: subsets in lexicographic order, residual
    // indices ascending with the first chosen slot most significant.
    struct Level {
        std::size_t u;
        std::vector<std::uint32_t> flat;  // (slot, residual) pairs, u per pattern
    };
    std::vector<Level> levels;
    for (std::size_t u = 0; u <= level; u++) {
        Level lv{u, {}};
        std::vector<std::size_t> subset(u);
        for (std::size_t i = 0; i < u; i++) {
            subset[i] = i;
        }
        while (true) {
            std::vector<std::uint32_t> radix(u), digit(u, 1);
            for (std::size_t i = 0; i < u; i++) {
                radix[i] = net.slots[subset[i]].arity == 1 ? 3 : 15;
            }
            while (true) {
                for (std::size_t i = 0; i < u; i++) {
                    lv.flat.push_back(static_cast<std::uint32_t>(subset[i]));
                    lv.flat.push_back(digit[i]);
                }
                std::size_t i = u;
                while (i > 0 && digit[i - 1] == radix[i - 1]) {
                    digit[i - 1] = 1;
                    i--;
                }
                if (i == 0) {
                    break;
                }
                digit[i - 1]++;
            }
            // Next subset in lexicographic order.
            std::size_t i = u;
            while (i > 0 && subset[i - 1] == n_slots - u + i - 1) {
                i--;
            }
            if (i == 0) {
                break;
            }
            subset[i - 1]++;
            for (std::size_t j = i; j < u; j++) {
                subset[j] = subset[j - 1] + 1;
            }
        }
        levels.push_back(std::move(lv));
    }

    std::atomic<std::uint64_t> performed{0};
    for (const auto &lv : levels) {
        const std::size_t width = 2 * lv.u;
        const std::size_t count = lv.u == 0 ? 1 : lv.flat.size() / width;
        std::vector<cplx> values(count, 0.0);
        parallel_for(count, report.workers, [&](std::size_t pid) {
            std::vector<std::pair<std::size_t, const std::vector<cplx> *>> ket_swaps, bra_swaps;
            for (std::size_t i = 0; i < lv.u; i++) {
                const std::size_t slot = lv.flat[pid * width + 2 * i];
                const std::size_t r = lv.flat[pid * width + 2 * i + 1];
                if (r >= ket_data[slot].size()) {
                    return;  // the residual factor vanishes
                }
                ket_swaps.emplace_back(ket_leaf[slot], &ket_data[slot][r]);
                bra_swaps.emplace_back(bra_leaf[slot], &bra_data[slot][r]);
            }
            const cplx k = ket.evaluate(ket_swaps);
            const cplx b = bra.evaluate(bra_swaps);
            performed.fetch_add(ket.variant_count() + bra.variant_count());
            values[pid] = k * b * constant;
        });
        cplx sum = 0;
        for (const cplx &x : values) {
            sum += x;
        }
        report.patterns += count;
        report.max_imag = std::max(report.max_imag, std::abs(sum.imag()));
        note_imag(sum.imag(), "T_" + std::to_string(lv.u), &report, options);
        report.level_sums.push_back(sum.real());
    }
    report.contractions_performed = performed.load();
    for (double t : report.level_sums) {
        report.value += t;
    }
    report.clamped = std::clamp(report.value, 0.0, 1.0);
    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace

double simulate_exact(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v, const EngineOptions &options) {
    const Boundary b = resolve_boundary(c, psi, v);
    const SlottedNetwork net = build_doubled_network(c, first_terms(b), b.ideal);
    std::vector<std::size_t> all(net.net.tensors().size());
    for (std::size_t i = 0; i < all.size(); i++) {
        all[i] = i;
    }
    const PlannedNetwork planned(net.net, all,
                                 {{&net.ket_in, &b.psi, false},
                                  {&net.ket_out, &b.v, true},
                                  {&net.bra_in, &b.psi, true},
                                  {&net.bra_out, &b.v, false}},
                                 options.contraction);
    const cplx value = planned.evaluate({});
    note_imag(value.imag(), "probability", nullptr, options);
    return value.real();
}

ApproxReport simulate_approx(const NoisyCircuit &c, const StateSpec &psi, const StateSpec &v, std::size_t level,
                             const EngineOptions &options) {
    const Boundary b = resolve_boundary(c, psi, v);
    SlottedNetwork net = build_doubled_network(c, first_terms(b), b.ideal);
    // Group pointers refer to the copy moved into run_approx; indices are
    // unchanged by substitution, so keep them alongside.
    const std::vector<std::size_t> ket_in = net.ket_in, ket_out = net.ket_out, bra_in = net.bra_in,
                                   bra_out = net.bra_out;
    return run_approx(std::move(net), {{&ket_in, &b.psi, false}, {&ket_out, &b.v, true}},
                      {{&bra_in, &b.psi, true}, {&bra_out, &b.v, false}}, 1.0, circuit_stats(c), level, options);
}

cplx density_matrix_entry(const NoisyCircuit &c, const StateSpec &rho0, std::string_view x, std::string_view y,
                          const EngineOptions &options, std::optional<std::size_t> level) {
    for (std::string_view s : {x, y}) {
        if (s.size() != c.n_qubits || s.find_first_not_of("01") != std::string_view::npos) {
            throw ValidationError("basis state must be " + std::to_string(c.n_qubits) + " characters of 0/1");
        }
    }
    if (rho0.ideal_output) {
        throw ValidationError("'ideal' is not a valid input state");
    }
    auto probability = [&](const StateSpec &v) {
        return level ? simulate_approx(c, rho0, v, *level, options).value : simulate_exact(c, rho0, v, options);
    };
    if (x == y) {
        return probability(StateSpec::product(std::string(x)));
    }
    const double h = 1 / std::numbers::sqrt2;
    auto mixed = [&](cplx w) {
        StateSpec v;
        v.terms.emplace_back(h, ProductState{std::string(x)});
        v.terms.emplace_back(w * h, ProductState{std::string(y)});
        return probability(v);
    };
    const cplx i(0, 1);
    const double p_plus = mixed(1.0);
    const double p_minus = mixed(-1.0);
    const double p_iplus = mixed(i);
    const double p_iminus = mixed(-i);
    return 0.5 * (cplx(p_plus - p_minus) - i * p_iplus + i * p_iminus);
}

double fidelity_exact(const NoisyCircuit &ideal, const NoisyCircuit &noisy, const EngineOptions &options) {
    const SlottedNetwork net = build_fidelity_network(ideal, noisy);
    const cplx value = contract(net.net, options.contraction) * std::ldexp(1.0, -2 * static_cast<int>(noisy.n_qubits));
    note_imag(value.imag(), "fidelity", nullptr, options);
    return value.real();
}

ApproxReport fidelity_approx(const NoisyCircuit &ideal, const NoisyCircuit &noisy, std::size_t level,
                             const EngineOptions &options) {
    SlottedNetwork net = build_fidelity_network(ideal, noisy);
    return run_approx(std::move(net), {}, {}, std::ldexp(1.0, -2 * static_cast<int>(noisy.n_qubits)),
                      circuit_stats(noisy), level, options);
}

}  // namespace qnoise
