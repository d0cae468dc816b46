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

#include "qnoise/noise_policy.h"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "qnoise/circuit_io.h"
#include "qnoise/errors.h"
#include "qnoise/rng.h"

namespace qnoise {

void CouplingGraph::validate() const {
    for (const auto &[a, b] : edges) {
        if (a == b) {
            throw ValidationError("coupling graph: self-loop on qubit " + std::to_string(a));
        }
        if (a >= n_qubits || b >= n_qubits) {
            throw ValidationError("coupling graph: edge " + std::to_string(a) + "-" + std::to_string(b) +
                                  " out of range for " + std::to_string(n_qubits) + " qubits");
        }
    }
}

namespace {

struct Token {
    std::string_view text;
    std::size_t column;
};

std::vector<Token> split_tokens(std::string_view line) {
    std::vector<Token> out;
    std::size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) {
            k++;
        }
        const std::size_t start = k;
        while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') {
            k++;
        }
        if (k > start) {
            out.push_back({line.substr(start, k - start), start + 1});
        }
    }
    return out;
}

std::uint64_t token_uint(const Token &t, std::size_t line) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
        throw ParseError("expected a non-negative integer, found '" + std::string(t.text) + "'", line, t.column);
    }
    return v;
}

}  // namespace

CouplingGraph parse_coupling_graph(std::string_view text) {
    CouplingGraph g;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t offset = 0;
    while (offset <= text.size()) {
        std::size_t end = text.find('\n', offset);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(offset, end - offset);
        offset = end + 1;
        line_no++;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const auto tokens = split_tokens(line);
        if (tokens.empty()) {
            continue;
        }
        if (!have_header) {
            if (tokens[0].text != "qubits" || tokens.size() != 2) {
                throw ParseError("expected 'qubits <n>' header", line_no, tokens[0].column);
            }
            g.n_qubits = token_uint(tokens[1], line_no);
            have_header = true;
            continue;
        }
        if (tokens[0].text != "edge") {
            throw ParseError("expected 'edge <i> <j>', found '" + std::string(tokens[0].text) + "'", line_no,
                             tokens[0].column);
        }
        if (tokens.size() != 3) {
            throw ParseError("expected 'edge <i> <j>'", line_no, tokens[0].column);
        }
        const std::uint64_t a = token_uint(tokens[1], line_no);
        const std::uint64_t b = token_uint(tokens[2], line_no);
        if (a >= g.n_qubits) {
            throw ParseError("qubit " + std::to_string(a) + " out of range", line_no, tokens[1].column);
        }
        if (b >= g.n_qubits) {
            throw ParseError("qubit " + std::to_string(b) + " out of range", line_no, tokens[2].column);
        }
        if (a == b) {
            throw ParseError("self-loop on qubit " + std::to_string(a), line_no, tokens[2].column);
        }
        g.edges.emplace_back(static_cast<Qubit>(a), static_cast<Qubit>(b));
    }
    if (!have_header) {
        throw ParseError("missing 'qubits <n>' header", line_no, 1);
    }
    return g;
}

std::string emit_coupling_graph(const CouplingGraph &g) {
    std::string out = "qubits " + std::to_string(g.n_qubits) + "\n";
    for (const auto &[a, b] : g.edges) {
        out += "edge " + std::to_string(a) + " " + std::to_string(b) + "\n";
    }
    return out;
}

CouplingGraph line_graph(std::size_t n) {
    CouplingGraph g{n, {}};
    for (std::size_t q = 0; q + 1 < n; q++) {
        g.edges.emplace_back(static_cast<Qubit>(q), static_cast<Qubit>(q + 1));
    }
    return g;
}

NoisePolicy parse_noise_policy(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
        if (colon == std::string_view::npos) {
            break;
        }
        start = colon + 1;
    }
    NoisePolicy p;
    const std::string_view mode = parts[0];
    std::size_t next = 1;
    if (mode == "explicit") {
        p.mode = PolicyMode::Explicit;
    } else if (mode == "per-gate") {
        p.mode = PolicyMode::PerGate;
    } else if (mode == "random-k") {
        p.mode = PolicyMode::RandomK;
        if (parts.size() < 2) {
            throw ValidationError("policy random-k needs a count, e.g. random-k:20:seed=7");
        }
        std::uint64_t k = 0;
        auto [ptr, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), k);
        if (ec != std::errc() || ptr != parts[1].data() + parts[1].size()) {
            throw ValidationError("policy random-k: bad count '" + std::string(parts[1]) + "'");
        }
        p.k = static_cast<std::size_t>(k);
        next = 2;
    } else if (mode == "crosstalk" || mode == "crosstalk-layered") {
        p.mode = PolicyMode::CrosstalkLayered;
    } else {
        throw ValidationError("unknown noise policy '" + std::string(mode) + "'");
    }
    for (std::size_t k = next; k < parts.size(); k++) {
        const std::string_view part = parts[k];
        const std::size_t eq = part.find('=');
        const std::string_view key = part.substr(0, eq);
        const std::string_view value = eq == std::string_view::npos ? std::string_view() : part.substr(eq + 1);
        if (key == "seed") {
            std::uint64_t s = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
            if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
                throw ValidationError("policy: bad seed '" + std::string(value) + "'");
            }
            p.seed = s;
        } else if (key == "channel") {
            try {
                p.channel = parse_channel_spec(value);
            } catch (const ParseError &e) {
                throw ValidationError(std::string("policy channel: ") + e.what());
            }
        } else {
            throw ValidationError("policy: unknown option '" + std::string(part) + "'");
        }
    }
    return p;
}

std::vector<std::pair<std::size_t, std::size_t>> greedy_layers(const NoisyCircuit &c) {
    std::vector<std::pair<std::size_t, std::size_t>> layers;
    std::vector<bool> used(c.n_qubits, false);
    std::size_t begin = 0;
    for (std::size_t k = 0; k < c.elements.size(); k++) {
        const auto &qs = element_qubits(c.elements[k]);
        const bool clash = std::any_of(qs.begin(), qs.end(), [&](Qubit q) { return used[q]; });
        if (clash) {
            layers.emplace_back(begin, k);
            begin = k;
            std::fill(used.begin(), used.end(), false);
        }
        for (Qubit q : qs) {
            used[q] = true;
        }
    }
    if (begin < c.elements.size()) {
        layers.emplace_back(begin, c.elements.size());
    }
    return layers;
}

namespace {

std::uint64_t require_seed(const NoisePolicy &policy, const char *mode) {
    if (!policy.seed) {
        throw ValidationError(std::string(mode) + " policy requires a seed");
    }
    return *policy.seed;
}

bool is_depolarizing_template(const KrausChannel &ch) {
    return ch.arity == 1 && ch.label.rfind("depolarizing(", 0) == 0;
}

double depolarizing_parameter(const KrausChannel &ch) {
    // label is "depolarizing(<p>)"
    const std::string body = ch.label.substr(13, ch.label.size() - 14);
    double p = 0;
    std::from_chars(body.data(), body.data() + body.size(), p);
    return p;
}

NoisyCircuit apply_per_gate(const NoisyCircuit &c, const KrausChannel &tmpl) {
    NoisyCircuit out{c.n_qubits, {}, c.name};
    const bool widen = is_depolarizing_template(tmpl);
    const KrausChannel wide = widen ? two_qubit_depolarizing(depolarizing_parameter(tmpl)) : tmpl;
    for (const auto &e : c.elements) {
        out.elements.push_back(e);
        const auto *g = std::get_if<Gate>(&e);
        if (g == nullptr) {
            continue;
        }
        if (g->arity() == 1) {
            if (tmpl.arity == 1) {
                out.elements.emplace_back(NoiseOp{tmpl, g->qubits});
            }
        } else if (widen) {
            out.elements.emplace_back(NoiseOp{wide, g->qubits});
        } else if (tmpl.arity == 2) {
            out.elements.emplace_back(NoiseOp{tmpl, g->qubits});
        } else {
            for (Qubit q : g->qubits) {
                out.elements.emplace_back(NoiseOp{tmpl, {q}});
            }
        }
    }
    return out;
}

NoisyCircuit apply_random_k(const NoisyCircuit &c, const NoisePolicy &policy) {
    if (policy.k == 0) {
        return c;
    }
    const std::uint64_t seed = require_seed(policy, "random-k");
    std::vector<std::size_t> candidates;
    for (std::size_t k = 0; k < c.elements.size(); k++) {
        const auto *g = std::get_if<Gate>(&c.elements[k]);
        if (g != nullptr && g->arity() >= policy.channel.arity) {
            candidates.push_back(k);
        }
    }
    if (policy.k > candidates.size()) {
        throw ValidationError("random-k: k = " + std::to_string(policy.k) + " exceeds the " +
                              std::to_string(candidates.size()) + " eligible gates");
    }
    CounterRng pick(seed, streams::kRandomKGates);
    for (std::size_t k = 0; k < policy.k; k++) {
        const std::size_t j = k + static_cast<std::size_t>(pick.next_below(candidates.size() - k));
        std::swap(candidates[k], candidates[j]);
    }
    std::vector<std::size_t> chosen(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(policy.k));
    std::sort(chosen.begin(), chosen.end());

    CounterRng qubit_pick(seed, streams::kRandomKQubits);
    NoisyCircuit out{c.n_qubits, {}, c.name};
    std::size_t next = 0;
    for (std::size_t k = 0; k < c.elements.size(); k++) {
        out.elements.push_back(c.elements[k]);
        if (next < chosen.size() && chosen[next] == k) {
            next++;
            const auto &g = std::get<Gate>(c.elements[k]);
            if (policy.channel.arity == g.arity()) {
                out.elements.emplace_back(NoiseOp{policy.channel, g.qubits});
            } else {
                const Qubit q = g.qubits[qubit_pick.next_below(g.qubits.size())];
                out.elements.emplace_back(NoiseOp{policy.channel, {q}});
            }
        }
    }
    return out;
}

NoisyCircuit apply_crosstalk(const NoisyCircuit &c, const NoisePolicy &policy) {
    const std::uint64_t seed = require_seed(policy, "crosstalk");
    if (!policy.graph) {
        throw ValidationError("crosstalk policy requires a coupling graph");
    }
    const CouplingGraph &graph = *policy.graph;
    graph.validate();
    if (graph.n_qubits != c.n_qubits) {
        throw ValidationError("crosstalk: coupling graph has " + std::to_string(graph.n_qubits) +
                              " qubits, circuit has " + std::to_string(c.n_qubits));
    }
    CounterRng angles(seed, streams::kCrosstalkAngles);
    NoisyCircuit out{c.n_qubits, {}, c.name};
    std::vector<bool> busy(c.n_qubits);
    for (const auto &[begin, end] : greedy_layers(c)) {
        std::fill(busy.begin(), busy.end(), false);
        for (std::size_t k = begin; k < end; k++) {
            out.elements.push_back(c.elements[k]);
            if (std::holds_alternative<Gate>(c.elements[k])) {
                for (Qubit q : element_qubits(c.elements[k])) {
                    busy[q] = true;
                }
            }
        }
        for (const auto &[a, b] : graph.edges) {
            if (busy[a] != busy[b]) {
                out.elements.emplace_back(NoiseOp{zz_crosstalk(angles.next_uniform(-0.1, 0.1)), {a, b}});
            }
        }
    }
    return out;
}

}  // namespace

NoisyCircuit apply_noise_policy(const NoisyCircuit &c, const NoisePolicy &policy) {
    validate_channel(policy.channel);
    switch (policy.mode) {
        case PolicyMode::Explicit:
            return c;
        case PolicyMode::PerGate:
            return apply_per_gate(c, policy.channel);
        case PolicyMode::RandomK:
            return apply_random_k(c, policy);
        case PolicyMode::CrosstalkLayered:
            return apply_crosstalk(c, policy);
    }
    return c;
}

}  // namespace qnoise
