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

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <tuple>

#include "qnoise/errors.h"
#include "qnoise/tensornet.h"

namespace qnoise {

namespace {

// Output index o (rank r) maps to input offset hi[o >> low_bits] + lo[o & mask].
struct Transpose {
    bool identity = true;
    std::size_t low_bits = 0;
    std::vector<std::uint64_t> lo;
    std::vector<std::uint64_t> hi;

    static Transpose make(const std::vector<Axis> &in, const std::vector<Axis> &out) {
        Transpose t;
        const std::size_t r = in.size();
        if (in == out) {
            return t;
        }
        t.identity = false;
        std::vector<std::uint64_t> stride(r);
        for (std::size_t j = 0; j < r; j++) {
            const auto pos = static_cast<std::size_t>(std::find(in.begin(), in.end(), out[j]) - in.begin());
            stride[j] = std::uint64_t{1} << (r - 1 - pos);
        }
        // Output bit b (from the least significant end) is out axis r-1-b.
        t.low_bits = std::min<std::size_t>(r, 10);
        const std::size_t high_bits = r - t.low_bits;
        t.lo.assign(std::size_t{1} << t.low_bits, 0);
        t.hi.assign(std::size_t{1} << high_bits, 0);
        for (std::size_t v = 0; v < t.lo.size(); v++) {
            std::uint64_t off = 0;
            for (std::size_t b = 0; b < t.low_bits; b++) {
                if ((v >> b) & 1) {
                    off += stride[r - 1 - b];
                }
            }
            t.lo[v] = off;
        }
        for (std::size_t v = 0; v < t.hi.size(); v++) {
            std::uint64_t off = 0;
            for (std::size_t b = 0; b < high_bits; b++) {
                if ((v >> b) & 1) {
                    off += stride[r - 1 - (b + t.low_bits)];
                }
            }
            t.hi[v] = off;
        }
        return t;
    }

    void apply(const cplx *in, cplx *out) const {
        const std::size_t lo_n = lo.size();
        for (std::size_t h = 0; h < hi.size(); h++) {
            const cplx *base = in + hi[h];
            cplx *dst = out + h * lo_n;
            for (std::size_t l = 0; l < lo_n; l++) {
                dst[l] = base[lo[l]];
            }
        }
    }
};

// C[m x n] = A[m x k] * B[k x n], all row-major; C is overwritten.
void matmul(const cplx *a, const cplx *b, cplx *c, std::size_t m, std::size_t k, std::size_t n) {
    const auto *ad = reinterpret_cast<const double *>(a);
    const auto *bd = reinterpret_cast<const double *>(b);
    auto *cd = reinterpret_cast<double *>(c);
    if (n >= 4) {
        std::fill(cd, cd + 2 * m * n, 0.0);
        for (std::size_t i = 0; i < m; i++) {
            double *crow = cd + 2 * i * n;
            for (std::size_t p = 0; p < k; p++) {
                const double ar = ad[2 * (i * k + p)];
                const double ai = ad[2 * (i * k + p) + 1];
                if (ar == 0 && ai == 0) {
                    continue;
                }
                const double *brow = bd + 2 * p * n;
                for (std::size_t j = 0; j < n; j++) {
                    const double br = brow[2 * j];
                    const double bi = brow[2 * j + 1];
                    crow[2 * j] += ar * br - ai * bi;
                    crow[2 * j + 1] += ar * bi + ai * br;
                }
            }
        }
        return;
    }
    for (std::size_t i = 0; i < m; i++) {
        const double *arow = ad + 2 * i * k;
        for (std::size_t j = 0; j < n; j++) {
            double sr = 0;
            double si = 0;
            for (std::size_t p = 0; p < k; p++) {
                const double ar = arow[2 * p];
                const double ai = arow[2 * p + 1];
                const double br = bd[2 * (p * n + j)];
                const double bi = bd[2 * (p * n + j) + 1];
                sr += ar * br - ai * bi;
                si += ar * bi + ai * br;
            }
            cd[2 * (i * n + j)] = sr;
            cd[2 * (i * n + j) + 1] = si;
        }
    }
}

std::string axis_list(const std::vector<Axis> &axes, const std::function<std::string(Axis)> &name) {
    std::string out = "{";
    for (std::size_t k = 0; k < axes.size(); k++) {
        if (k > 0) {
            out += ", ";
        }
        out += name ? name(axes[k]) : std::to_string(axes[k]);
    }
    return out + "}";
}

std::size_t budget_rank(std::size_t budget) {
    // Largest r with 2^r <= budget.
    return budget == 0 ? 0 : static_cast<std::size_t>(std::bit_width(budget) - 1);
}

using Pair = std::pair<std::size_t, std::size_t>;

// Greedy path: repeatedly contract the connected pair with the smallest
// result, ties broken by the smallest shared axis id, then operand ids.
std::vector<Pair> greedy_path(const std::vector<std::vector<Axis>> &leaves, std::size_t max_rank,
                              const std::function<std::string(Axis)> &name) {
    std::vector<std::vector<Axis>> ops = leaves;
    std::vector<bool> alive(ops.size(), true);
    Axis max_axis = 0;
    for (const auto &l : leaves) {
        for (Axis a : l) {
            max_axis = std::max(max_axis, a);
        }
    }
    std::vector<std::array<std::size_t, 2>> owners(static_cast<std::size_t>(max_axis) + 1, {SIZE_MAX, SIZE_MAX});
    auto add_owner = [&](Axis a, std::size_t id) {
        auto &o = owners[a];
        (o[0] == SIZE_MAX ? o[0] : o[1]) = id;
    };
    for (std::size_t id = 0; id < ops.size(); id++) {
        for (Axis a : ops[id]) {
            add_owner(a, id);
        }
    }
    using Key = std::tuple<std::size_t, Axis, std::size_t, std::size_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
    auto push_pair = [&](std::size_t a, std::size_t b) {
        if (a > b) {
            std::swap(a, b);
        }
        std::size_t shared = 0;
        Axis min_shared = std::numeric_limits<Axis>::max();
        for (Axis x : ops[a]) {
            const auto &o = owners[x];
            if (o[0] == b || o[1] == b) {
                shared++;
                min_shared = std::min(min_shared, x);
            }
        }
        const std::size_t rank = ops[a].size() + ops[b].size() - 2 * shared;
        queue.emplace(rank, min_shared, a, b);
    };
    for (Axis a = 0; a <= max_axis; a++) {
        const auto &o = owners[a];
        if (o[0] != SIZE_MAX && o[1] != SIZE_MAX) {
            push_pair(o[0], o[1]);
        }
    }
    std::vector<Pair> path;
    while (!queue.empty()) {
        const auto [rank, label, a, b] = queue.top();
        queue.pop();
        if (!alive[a] || !alive[b]) {
            continue;
        }
        std::vector<Axis> result;
        for (Axis x : ops[a]) {
            if (owners[x][0] != b && owners[x][1] != b) {
                result.push_back(x);
            }
        }
        for (Axis x : ops[b]) {
            if (owners[x][0] != a && owners[x][1] != a) {
                result.push_back(x);
            }
        }
        if (result.size() > max_rank) {
            std::vector<Axis> shared;
            for (Axis x : ops[a]) {
                if (owners[x][0] == b || owners[x][1] == b) {
                    shared.push_back(x);
                }
            }
            throw ResourceError("contraction exceeds the memory budget: contracting bonds " + axis_list(shared, name) +
                                " yields a rank-" + std::to_string(result.size()) + " tensor over " +
                                axis_list(result, name));
        }
        const std::size_t id = ops.size();
        alive[a] = alive[b] = false;
        for (const std::size_t src : {a, b}) {
            for (Axis x : ops[src]) {
                auto &o = owners[x];
                if (o[0] != src && o[1] != src) {
                    continue;  // shared axis, already cleared
                }
                const std::size_t other = o[0] == src ? o[1] : o[0];
                if (other == a || other == b) {
                    o = {SIZE_MAX, SIZE_MAX};
                } else {
                    o = {other, id};
                }
            }
        }
        ops.push_back(std::move(result));
        alive.push_back(true);
        path.emplace_back(a, b);
        for (Axis x : ops[id]) {
            const std::size_t other = owners[x][0];
            if (other != SIZE_MAX) {
                push_pair(other, id);
            }
        }
    }
    return path;
}

// Optimal path by total cost over all bipartitions (subset DP). Returns an
// empty path if the network is too wide for the bitmask representation or no
// path fits the budget; the caller then falls back to the greedy search.
std::optional<std::vector<Pair>> exhaustive_path(const std::vector<std::vector<Axis>> &leaves, std::size_t max_rank) {
    const std::size_t n = leaves.size();
    std::vector<Axis> ids;
    for (const auto &l : leaves) {
        ids.insert(ids.end(), l.begin(), l.end());
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() > 128 || n > 20) {
        return std::nullopt;
    }
    using Mask = std::array<std::uint64_t, 2>;
    auto rank_of = [](const Mask &m) { return static_cast<std::size_t>(std::popcount(m[0]) + std::popcount(m[1])); };
    const std::size_t full = (std::size_t{1} << n) - 1;
    std::vector<Mask> mask(full + 1, Mask{0, 0});
    for (std::size_t i = 0; i < n; i++) {
        for (Axis a : leaves[i]) {
            const auto k = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), a) - ids.begin());
            mask[std::size_t{1} << i][k / 64] ^= std::uint64_t{1} << (k % 64);
        }
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(full + 1, inf);
    std::vector<std::size_t> split(full + 1, 0);
    for (std::size_t s = 1; s <= full; s++) {
        const std::size_t low = s & (~s + 1);
        if (s == low) {
            cost[s] = rank_of(mask[s]) <= max_rank ? 0 : inf;
            continue;
        }
        mask[s] = {mask[low][0] ^ mask[s ^ low][0], mask[low][1] ^ mask[s ^ low][1]};
        if (rank_of(mask[s]) > max_rank) {
            continue;
        }
        double best = inf;
        std::size_t best_sub = 0;
        // Enumerate subsets containing the lowest bit, so each split is seen once.
        for (std::size_t sub = (s - 1) & s; sub > 0; sub = (sub - 1) & s) {
            if (!(sub & low)) {
                continue;
            }
            const std::size_t rest = s ^ sub;
            const double c = cost[sub] + cost[rest];
            if (!(c < best)) {
                continue;
            }
            const Mask u = {mask[sub][0] | mask[rest][0], mask[sub][1] | mask[rest][1]};
            const double total = c + std::ldexp(1.0, static_cast<int>(rank_of(u)));
            if (total < best) {
                best = total;
                best_sub = sub;
            }
        }
        cost[s] = best;
        split[s] = best_sub;
    }
    if (!std::isfinite(cost[full])) {
        return std::nullopt;
    }
    // Post-order emission; operand ids follow the SSA numbering of the plan.
    std::vector<Pair> path;
    std::size_t next_id = n;
    std::function<std::size_t(std::size_t)> emit = [&](std::size_t s) -> std::size_t {
        if ((s & (s - 1)) == 0) {
            return static_cast<std::size_t>(std::countr_zero(s));
        }
        const std::size_t a = emit(split[s]);
        const std::size_t b = emit(s ^ split[s]);
        path.emplace_back(a, b);
        return next_id++;
    };
    emit(full);
    return path;
}

}  // namespace

struct ContractionPlan::Step {
    std::size_t a = 0;
    std::size_t b = 0;
    Transpose ta;
    Transpose tb;
    std::size_t m = 1;
    std::size_t k = 1;
    std::size_t n = 1;
};

ContractionPlan ContractionPlan::build(const std::vector<std::vector<Axis>> &leaves, const ContractOptions &options,
                                       const std::function<std::string(Axis)> &name) {
    const std::size_t max_rank = budget_rank(options.memory_budget);
    for (const auto &l : leaves) {
        if (l.size() > max_rank) {
            throw ResourceError("tensor over " + axis_list(l, name) + " exceeds the memory budget");
        }
    }
    std::optional<std::vector<Pair>> path;
    const bool small = leaves.size() <= kExhaustiveLimit;
    if (options.strategy == PathStrategy::Exhaustive ||
        (options.strategy == PathStrategy::Auto && small)) {
        path = exhaustive_path(leaves, max_rank);
    }
    if (!path) {
        path = greedy_path(leaves, max_rank, name);
    }

    ContractionPlan plan;
    plan.leaf_count_ = leaves.size();
    std::vector<std::vector<Axis>> ops = leaves;
    std::vector<bool> consumed(leaves.size(), false);
    for (const auto &l : leaves) {
        plan.max_rank_ = std::max(plan.max_rank_, l.size());
    }
    for (const auto &[a, b] : *path) {
        const auto &xa = ops[a];
        const auto &xb = ops[b];
        std::vector<Axis> shared, free_a, free_b;
        for (Axis x : xa) {
            (std::find(xb.begin(), xb.end(), x) != xb.end() ? shared : free_a).push_back(x);
        }
        for (Axis x : xb) {
            if (std::find(xa.begin(), xa.end(), x) == xa.end()) {
                free_b.push_back(x);
            }
        }
        auto step = std::make_shared<Step>();
        step->a = a;
        step->b = b;
        std::vector<Axis> order_a = free_a;
        order_a.insert(order_a.end(), shared.begin(), shared.end());
        std::vector<Axis> order_b = shared;
        order_b.insert(order_b.end(), free_b.begin(), free_b.end());
        step->ta = Transpose::make(xa, order_a);
        step->tb = Transpose::make(xb, order_b);
        step->m = std::size_t{1} << free_a.size();
        step->k = std::size_t{1} << shared.size();
        step->n = std::size_t{1} << free_b.size();
        std::vector<Axis> result = free_a;
        result.insert(result.end(), free_b.begin(), free_b.end());
        if (result.size() > max_rank) {
            throw ResourceError("contraction exceeds the memory budget: contracting bonds " + axis_list(shared, name) +
                                " yields a tensor over " + axis_list(result, name));
        }
        plan.max_rank_ = std::max(plan.max_rank_, result.size());
        plan.cost_ += std::ldexp(1.0, static_cast<int>(free_a.size() + shared.size() + free_b.size()));
        consumed[a] = consumed[b] = true;
        ops.push_back(std::move(result));
        consumed.push_back(false);
        plan.steps_.push_back(std::move(step));
    }
    for (std::size_t id = 0; id < ops.size(); id++) {
        if (!consumed[id]) {
            if (!ops[id].empty()) {
                throw ValidationError("contraction plan: network has open axes " + axis_list(ops[id], name));
            }
            plan.roots_.push_back(id);
        }
    }
    return plan;
}

cplx ContractionPlan::execute(std::span<const std::vector<cplx> *const> leaves) const {
    if (leaves.size() != leaf_count_) {
        throw ValidationError("contraction plan: expected " + std::to_string(leaf_count_) + " tensors");
    }
    std::vector<const cplx *> ptr(leaf_count_ + steps_.size(), nullptr);
    for (std::size_t i = 0; i < leaf_count_; i++) {
        ptr[i] = leaves[i]->data();
    }
    std::vector<std::vector<cplx>> owned(steps_.size());
    std::vector<cplx> scratch_a, scratch_b;
    for (std::size_t s = 0; s < steps_.size(); s++) {
        const Step &st = *steps_[s];
        const cplx *a = ptr[st.a];
        const cplx *b = ptr[st.b];
        if (!st.ta.identity) {
            scratch_a.resize(st.m * st.k);
            st.ta.apply(a, scratch_a.data());
            a = scratch_a.data();
        }
        if (!st.tb.identity) {
            scratch_b.resize(st.k * st.n);
            st.tb.apply(b, scratch_b.data());
            b = scratch_b.data();
        }
        owned[s].resize(st.m * st.n);
        matmul(a, b, owned[s].data(), st.m, st.k, st.n);
        ptr[leaf_count_ + s] = owned[s].data();
        for (const std::size_t id : {st.a, st.b}) {
            if (id >= leaf_count_) {
                std::vector<cplx>().swap(owned[id - leaf_count_]);
            }
        }
    }
    cplx value = 1;
    for (std::size_t id : roots_) {
        value *= ptr[id][0];
    }
    return value;
}

Axis Network::new_axis(std::string name) {
    names_.push_back(std::move(name));
    return static_cast<Axis>(names_.size() - 1);
}

std::size_t Network::add_tensor(Tensor t) {
    tensors_.push_back(std::move(t));
    return tensors_.size() - 1;
}

std::vector<std::vector<std::size_t>> Network::bonds() const {
    std::vector<std::vector<std::size_t>> out(names_.size());
    for (std::size_t i = 0; i < tensors_.size(); i++) {
        for (Axis a : tensors_[i].axes) {
            out.at(a).push_back(i);
        }
    }
    return out;
}

std::vector<Axis> Network::open_axes() const {
    std::vector<Axis> out;
    const auto b = bonds();
    for (std::size_t a = 0; a < b.size(); a++) {
        if (b[a].size() == 1) {
            out.push_back(static_cast<Axis>(a));
        }
    }
    return out;
}

void Network::validate() const {
    for (const auto &t : tensors_) {
        if (t.data.size() != (std::size_t{1} << t.axes.size())) {
            throw ValidationError("tensor data size does not match its rank");
        }
        for (std::size_t i = 0; i < t.axes.size(); i++) {
            if (t.axes[i] >= names_.size()) {
                throw ValidationError("tensor uses an undeclared axis");
            }
            for (std::size_t j = 0; j < i; j++) {
                if (t.axes[i] == t.axes[j]) {
                    throw ValidationError("axis " + names_[t.axes[i]] + " repeats within a tensor");
                }
            }
        }
    }
    const auto b = bonds();
    for (std::size_t a = 0; a < b.size(); a++) {
        if (b[a].size() > 2) {
            throw ValidationError("axis " + names_[a] + " is shared by more than two tensors");
        }
    }
}

std::vector<Network> split_components(const Network &net) {
    const auto &ts = net.tensors();
    std::vector<std::size_t> parent(ts.size());
    for (std::size_t i = 0; i < ts.size(); i++) {
        parent[i] = i;
    }
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto &holders : net.bonds()) {
        if (holders.size() == 2) {
            const std::size_t ra = find(holders[0]);
            const std::size_t rb = find(holders[1]);
            if (ra != rb) {
                parent[std::max(ra, rb)] = std::min(ra, rb);
            }
        }
    }
    std::vector<Network> out;
    std::vector<std::size_t> index(ts.size(), SIZE_MAX);
    for (std::size_t i = 0; i < ts.size(); i++) {
        const std::size_t r = find(i);
        if (index[r] == SIZE_MAX) {
            index[r] = out.size();
            Network piece;
            for (std::size_t a = 0; a < net.axis_count(); a++) {
                piece.new_axis(net.axis_name(static_cast<Axis>(a)));
            }
            out.push_back(std::move(piece));
        }
        out[index[r]].add_tensor(ts[i]);
    }
    return out;
}

cplx contract(const Network &net, const ContractOptions &options) {
    net.validate();
    const auto open = net.open_axes();
    if (!open.empty()) {
        throw ValidationError("contract: network has " + std::to_string(open.size()) + " open axes");
    }
    std::vector<std::vector<Axis>> leaves;
    std::vector<const std::vector<cplx> *> data;
    for (const auto &t : net.tensors()) {
        leaves.push_back(t.axes);
        data.push_back(&t.data);
    }
    const auto plan = ContractionPlan::build(leaves, options, [&](Axis a) { return net.axis_name(a); });
    return plan.execute(data);
}

}  // namespace qnoise
