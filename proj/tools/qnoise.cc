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

// qnoise: command-line front end.
//
//   qnoise simulate  --circuit c.qn [--level L | --exact | --mode M] ...
//   qnoise eqcheck   --ideal a.qn --circuit b.qn [--level L] [--threshold t]
//   qnoise decompose 'depolarizing(0.01)'
//   qnoise gen       bv|qft|qaoa|random ... [--policy P] [--out f.qn]
//   qnoise bench     [--family qaoa] [--n 50] [--noises 20] [--level 2]
//
// Exit codes: 0 success, 1 internal error, 2 parse error, 3 validation
// error, 4 resource limit.

#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qnoise/channels.h"
#include "qnoise/circuit_io.h"
#include "qnoise/engine.h"
#include "qnoise/errors.h"
#include "qnoise/generators.h"
#include "qnoise/noise_policy.h"
#include "qnoise/oracles.h"

namespace {

using json = nlohmann::ordered_json;
using namespace qnoise;

constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitResource = 4;

struct Common {
    std::string circuit;
    std::string ideal;
    std::string policy;
    std::string graph;
    std::string psi;
    std::string v = "ideal";
    std::string mode;
    std::string out;
    std::optional<std::size_t> level;
    bool exact = false;
    std::optional<std::uint64_t> samples;
    std::optional<double> delta;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::uint64_t> mem_budget;
    double threshold = 0.99;
    bool sweep = false;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A ParseError with the file name in front of its position.
struct FileParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse errors are re-thrown with the file name in front.
template <typename T, typename F>
T parse_file(const std::string &path, F parse) {
    const std::string text = read_file(path);
    try {
        return parse(text);
    } catch (const ParseError &e) {
        throw FileParseError(path + ": " + e.what());
    }
}

NoisyCircuit load_circuit(const std::string &path) {
    return parse_file<NoisyCircuit>(path, [](std::string_view t) { return parse_circuit(t); });
}

/// Writes to a sibling temporary file, then renames it over `path`, so an
/// error never leaves a partial file behind.
void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ValidationError("cannot write '" + path + "'");
        }
        out << text;
        if (!out.flush()) {
            std::filesystem::remove(tmp);
            throw ValidationError("cannot write '" + path + "'");
        }
    }
    std::filesystem::rename(tmp, target);
}

std::size_t resolve_workers(const Common &c) {
    if (c.workers) {
        return effective_workers(*c.workers);
    }
    if (const char *env = std::getenv("QNOISE_WORKERS")) {
        std::size_t value = 0;
        const std::string_view text(env);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw ValidationError("QNOISE_WORKERS must be a non-negative integer, got '" + std::string(text) + "'");
        }
        return effective_workers(value);
    }
    return effective_workers(0);
}

EngineOptions engine_options(const Common &c, json &warnings) {
    EngineOptions opts;
    opts.workers = resolve_workers(c);
    if (c.mem_budget) {
        opts.contraction.memory_budget = *c.mem_budget;
    }
    opts.warn = [&warnings](const std::string &w) {
        warnings.push_back(w);
        std::cerr << "warning: " << w << "\n";
    };
    return opts;
}

/// Applies --policy (and --graph) to a loaded circuit. --seed fills in a
/// missing policy seed.
NoisyCircuit with_policy(NoisyCircuit c, const Common &cfg, json &echo) {
    if (cfg.policy.empty()) {
        return c;
    }
    NoisePolicy policy = parse_noise_policy(cfg.policy);
    if (!policy.seed && cfg.seed) {
        policy.seed = cfg.seed;
    }
    if (policy.mode == PolicyMode::CrosstalkLayered) {
        if (cfg.graph.empty()) {
            policy.graph = line_graph(c.n_qubits);
        } else {
            policy.graph = parse_file<CouplingGraph>(cfg.graph, [](std::string_view t) { return parse_coupling_graph(t); });
        }
    }
    echo["policy"] = cfg.policy;
    if (policy.seed) {
        echo["policy_seed"] = *policy.seed;
    }
    return apply_noise_policy(c, policy);
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); r++) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); c++) {
            row.push_back(complex_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json stats_json(const NoisyCircuit &c) {
    const CircuitStats s = circuit_stats(c);
    return json{{"n_qubits", s.n_qubits},
                {"gate_count", s.gate_count},
                {"single_qubit_noises", s.single_qubit_noise_count},
                {"two_qubit_noises", s.two_qubit_noise_count},
                {"max_noise_rate", s.max_noise_rate}};
}

json approx_json(const ApproxReport &r) {
    return json{{"level", r.level},
                {"value", r.value},
                {"clamped", r.clamped},
                {"level_sums", r.level_sums},
                {"bound", r.bound},
                {"bound_loose", r.bound_loose},
                {"contraction_count", r.contraction_count},
                {"contractions_performed", r.contractions_performed},
                {"patterns", r.patterns},
                {"max_imag", r.max_imag},
                {"elapsed_seconds", r.elapsed_seconds}};
}

json report_header(const std::string &command) { return json{{"schema", 1}, {"command", command}}; }

std::string dump(const json &j) { return j.dump(2) + "\n"; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string default_psi(const Common &cfg, std::size_t n) {
    return cfg.psi.empty() ? std::string(n, '0') : cfg.psi;
}

// --- simulate ----------------------------------------------------------------

std::string resolve_mode(const Common &cfg) {
    if (cfg.exact) {
        if (!cfg.mode.empty() && cfg.mode != "exact") {
            throw ValidationError("--exact conflicts with --mode " + cfg.mode);
        }
        return "exact";
    }
    if (!cfg.mode.empty()) {
        return cfg.mode;
    }
    return cfg.level ? "approx" : "exact";
}

int cmd_simulate(const Common &cfg) {
    json report = report_header("simulate");
    json inputs;
    inputs["circuit"] = cfg.circuit;
    const NoisyCircuit c = with_policy(load_circuit(cfg.circuit), cfg, inputs);
    const std::string mode = resolve_mode(cfg);
    const StateSpec psi = StateSpec::parse(default_psi(cfg, c.n_qubits));
    const StateSpec v = StateSpec::parse(cfg.v);
    psi.validate(c.n_qubits, false);
    v.validate(c.n_qubits, true);
    inputs["psi"] = default_psi(cfg, c.n_qubits);
    inputs["v"] = cfg.v;
    inputs["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
    report["inputs"] = inputs;
    report["circuit"] = stats_json(c);
    report["mode"] = mode;

    json warnings = json::array();
    const EngineOptions opts = engine_options(cfg, warnings);
    report["workers"] = opts.workers;
    const auto t0 = std::chrono::steady_clock::now();
    if (mode == "exact") {
        report["value"] = simulate_exact(c, psi, v, opts);
    } else if (mode == "approx") {
        if (!cfg.level) {
            throw ValidationError("--mode approx needs --level");
        }
        const ApproxReport r = simulate_approx(c, psi, v, *cfg.level, opts);
        report["value"] = r.value;
        report["approx"] = approx_json(r);
        report["level"] = r.level;
        report["bound"] = r.bound;
        report["contraction_count"] = r.contraction_count;
    } else if (mode == "dense") {
        report["value"] = dense_simulate(c, psi, v);
    } else if (mode == "kraus-sum") {
        report["value"] = kraus_sum_exact(c, psi, v);
        report["kraus_terms"] = kraus_term_count(c);
    } else if (mode == "trajectories") {
        std::uint64_t samples = 0;
        if (cfg.samples) {
            samples = *cfg.samples;
        } else if (cfg.delta) {
            samples = hoeffding_samples(*cfg.delta);
        } else {
            throw ValidationError("--mode trajectories needs --samples or --delta");
        }
        const std::uint64_t seed = cfg.seed.value_or(0);
        const TrajectoryEstimate est = trajectories(c, psi, v, samples, seed, opts.workers);
        report["value"] = est.mean;
        report["trajectories"] = json{{"samples", est.samples},
                                      {"seed", est.seed},
                                      {"std_error", est.std_error},
                                      {"delta", cfg.delta ? json(*cfg.delta) : json(nullptr)}};
    } else {
        throw ValidationError("unknown --mode '" + mode + "' (exact, approx, dense, kraus-sum, trajectories)");
    }
    report["elapsed_seconds"] = seconds_since(t0);
    report["warnings"] = warnings;
    write_output(cfg.out, dump(report));
    return 0;
}

// --- eqcheck -----------------------------------------------------------------

int cmd_eqcheck(const Common &cfg) {
    if (cfg.ideal.empty()) {
        throw ValidationError("eqcheck needs --ideal and --circuit");
    }
    if (!(cfg.threshold >= 0 && cfg.threshold <= 1)) {
        throw ValidationError("--threshold must lie in [0, 1]");
    }
    json report = report_header("eqcheck");
    json inputs;
    inputs["ideal"] = cfg.ideal;
    inputs["circuit"] = cfg.circuit;
    const NoisyCircuit ideal = load_circuit(cfg.ideal);
    const NoisyCircuit noisy = with_policy(load_circuit(cfg.circuit), cfg, inputs);
    inputs["threshold"] = cfg.threshold;
    inputs["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
    report["inputs"] = inputs;
    report["circuit"] = stats_json(noisy);

    std::string mode = resolve_mode(cfg);
    report["mode"] = mode;
    json warnings = json::array();
    const EngineOptions opts = engine_options(cfg, warnings);
    report["workers"] = opts.workers;
    const auto t0 = std::chrono::steady_clock::now();
    double fidelity = 0;
    if (mode == "exact") {
        fidelity = fidelity_exact(ideal, noisy, opts);
    } else if (mode == "dense") {
        fidelity = dense_fidelity(ideal, noisy);
    } else if (mode == "approx") {
        if (!cfg.level) {
            throw ValidationError("--mode approx needs --level");
        }
        if (cfg.sweep) {
            // One row per level; the exact column is filled when the full
            // contraction fits the budget.
            std::optional<double> exact;
            try {
                exact = fidelity_exact(ideal, noisy, opts);
            } catch (const ResourceError &e) {
                warnings.push_back(std::string("exact fidelity skipped: ") + e.what());
            }
            json rows = json::array();
            for (std::size_t l = 0; l <= *cfg.level; l++) {
                const ApproxReport r = fidelity_approx(ideal, noisy, l, opts);
                json row = approx_json(r);
                if (exact) {
                    row["error"] = std::abs(*exact - r.value);
                    row["within_bound"] = std::abs(*exact - r.value) <= r.bound + 1e-12;
                }
                rows.push_back(std::move(row));
                fidelity = r.value;
            }
            report["sweep"] = rows;
            report["exact"] = exact ? json(*exact) : json(nullptr);
        } else {
            const ApproxReport r = fidelity_approx(ideal, noisy, *cfg.level, opts);
            fidelity = r.value;
            report["approx"] = approx_json(r);
        }
    } else {
        throw ValidationError("eqcheck --mode must be exact, approx or dense");
    }
    if (mode == "approx") {
        const json a = cfg.sweep ? report["sweep"].back() : report["approx"];
        report["level"] = a["level"];
        report["bound"] = a["bound"];
        report["contraction_count"] = a["contraction_count"];
    }
    report["value"] = fidelity;
    report["fidelity"] = fidelity;
    report["equivalent_within"] = fidelity >= cfg.threshold;
    report["elapsed_seconds"] = seconds_since(t0);
    report["warnings"] = warnings;
    write_output(cfg.out, dump(report));
    return 0;
}

// --- decompose ---------------------------------------------------------------

int cmd_decompose(const std::string &spec, const std::string &out) {
    const KrausChannel ch = parse_channel_spec(spec);
    const SuperOpMatrix m = matrix_rep(ch);
    const FactorDecomposition d = decompose(m);
    json report = report_header("decompose");
    report["channel"] = ch.label;
    report["arity"] = ch.arity;
    report["kraus_count"] = ch.kraus.size();
    report["noise_rate"] = noise_rate(ch);
    report["matrix"] = matrix_json(m.matrix);
    report["reshuffled"] = matrix_json(reshuffle(m));
    report["singular_values"] = d.singular_values;
    json terms = json::array();
    for (std::size_t j = 0; j < d.terms.size(); j++) {
        terms.push_back(json{{"singular_value", d.singular_values[j]},
                             {"ket", matrix_json(d.terms[j].ket)},
                             {"bra", matrix_json(d.terms[j].bra)}});
    }
    report["terms"] = terms;
    report["reconstruction_error"] = frobenius_distance(d.reconstruct(), m.matrix);
    report["phase_convention"] =
        "ket_j = sigma_j * reshape(u_j), bra_j = reshape(conj(v_j)); the largest-magnitude entry of u_j is real and "
        "non-negative (first on ties). Only ket_j (x) bra_j is convention-free.";
    write_output(out, dump(report));
    return 0;
}

// --- gen ---------------------------------------------------------------------

std::vector<std::pair<Qubit, Qubit>> parse_edges(const std::string &text) {
    std::vector<std::pair<Qubit, Qubit>> edges;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            throw ValidationError("edge '" + item + "' must look like 0-1");
        }
        unsigned long a = 0;
        unsigned long b = 0;
        const std::string lhs = item.substr(0, dash);
        const std::string rhs = item.substr(dash + 1);
        const auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), a);
        const auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), b);
        if (r1.ec != std::errc() || r1.ptr != lhs.data() + lhs.size() || r2.ec != std::errc() ||
            r2.ptr != rhs.data() + rhs.size() || lhs.empty() || rhs.empty()) {
            throw ValidationError("edge '" + item + "' must look like 0-1");
        }
        edges.emplace_back(static_cast<Qubit>(a), static_cast<Qubit>(b));
    }
    return edges;
}

struct GenConfig {
    std::string family;
    std::size_t n = 0;
    std::string secret;
    std::string edges;
    std::string graph;
    std::vector<double> gammas;
    std::vector<double> betas;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t depth = 0;
    std::optional<std::uint64_t> seed;
    std::string policy;
    std::string out;
};

NoisyCircuit generate(const GenConfig &g) {
    if (g.family == "bv") {
        const std::string secret = g.secret.empty() ? std::string(g.n, '1') : g.secret;
        return gen_bv(g.n == 0 ? secret.size() : g.n, secret);
    }
    if (g.family == "qft") {
        return gen_qft(g.n);
    }
    if (g.family == "qaoa") {
        std::vector<std::pair<Qubit, Qubit>> edges;
        if (!g.edges.empty()) {
            edges = parse_edges(g.edges);
        } else if (!g.graph.empty()) {
            edges = parse_file<CouplingGraph>(g.graph, [](std::string_view t) { return parse_coupling_graph(t); }).edges;
        } else {
            edges = line_graph(g.n).edges;
        }
        const std::vector<double> gammas = g.gammas.empty() ? std::vector<double>{0.5} : g.gammas;
        const std::vector<double> betas = g.betas.empty() ? std::vector<double>{0.5} : g.betas;
        return gen_qaoa(g.n, edges, gammas, betas);
    }
    if (g.family == "random") {
        if (!g.seed) {
            throw ValidationError("gen random needs --seed");
        }
        return gen_random_inst(g.rows, g.cols, g.depth, *g.seed);
    }
    throw ValidationError("unknown family '" + g.family + "' (bv, qft, qaoa, random)");
}

int cmd_gen(const GenConfig &g) {
    NoisyCircuit c = generate(g);
    if (!g.policy.empty()) {
        Common cfg;
        cfg.policy = g.policy;
        cfg.graph = g.graph;
        cfg.seed = g.seed;
        json ignored;
        c = with_policy(std::move(c), cfg, ignored);
    }
    write_output(g.out, emit_circuit(c));
    return 0;
}

// --- bench -------------------------------------------------------------------

struct BenchConfig {
    std::string family = "qaoa";
    std::size_t n = 50;
    std::size_t noises = 20;
    double p = 0.001;
    std::size_t level = 2;
    std::uint64_t seed = 1;
    double delta = 0.01;
};

int cmd_bench(const BenchConfig &b, const Common &cfg) {
    GenConfig g;
    g.family = b.family;
    g.n = b.n;
    if (b.family == "random") {
        g.rows = 1;
        g.cols = b.n;
        g.depth = 8;
        g.seed = b.seed;
    }
    const NoisyCircuit base = generate(g);
    NoisePolicy policy;
    policy.mode = PolicyMode::RandomK;
    policy.k = b.noises;
    policy.seed = b.seed;
    policy.channel = depolarizing(b.p);
    const NoisyCircuit c = apply_noise_policy(base, policy);

    json report = report_header("bench");
    report["inputs"] = json{{"family", b.family}, {"n", b.n},         {"noises", b.noises},
                            {"p", b.p},           {"level", b.level}, {"seed", b.seed}};
    report["circuit"] = stats_json(c);
    json warnings = json::array();
    const EngineOptions opts = engine_options(cfg, warnings);
    report["workers"] = opts.workers;
    const StateSpec psi = StateSpec::product(std::string(c.n_qubits, '0'));
    const StateSpec v = StateSpec::ideal();
    json rows = json::array();
    const auto t0 = std::chrono::steady_clock::now();
    double last = 0;
    for (std::size_t l = 0; l <= b.level; l++) {
        const ApproxReport r = simulate_approx(c, psi, v, l, opts);
        rows.push_back(approx_json(r));
        last = r.value;
    }
    report["levels"] = rows;
    report["value"] = last;
    report["trajectory_samples"] = hoeffding_samples(b.delta);
    report["elapsed_seconds"] = seconds_since(t0);
    report["warnings"] = warnings;
    write_output(cfg.out, dump(report));
    return 0;
}

void add_engine_flags(CLI::App *cmd, Common &c) {
    cmd->add_option("--workers", c.workers, "Worker threads (0 = all cores; default $QNOISE_WORKERS or all cores)");
    cmd->add_option("--mem-budget", c.mem_budget, "Largest intermediate tensor, in complex entries");
    cmd->add_option("--out", c.out, "Report path (default stdout)");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Noisy quantum circuit simulation and equivalence checking by doubled tensor networks"};
    app.require_subcommand(1);

    Common sim;
    auto *simulate = app.add_subcommand("simulate", "Estimate <v|E(|psi><psi|)|v>");
    simulate->add_option("--circuit", sim.circuit, "Circuit file")->required();
    simulate->add_option("--psi", sim.psi, "Input product state, e.g. 00+1 (default all zeros)");
    simulate->add_option("--v", sim.v, "Output state or 'ideal' for U|psi> (default ideal)");
    simulate->add_option("--mode", sim.mode, "exact | approx | dense | kraus-sum | trajectories");
    simulate->add_option("--level", sim.level, "Approximation level l");
    simulate->add_flag("--exact", sim.exact, "Full contraction");
    simulate->add_option("--samples", sim.samples, "Trajectory samples");
    simulate->add_option("--delta", sim.delta, "Trajectory accuracy; samples from the Hoeffding bound at 99%");
    simulate->add_option("--seed", sim.seed, "Seed for trajectories and randomized policies");
    simulate->add_option("--policy", sim.policy, "Noise policy applied before simulating");
    simulate->add_option("--graph", sim.graph, "Coupling graph for the crosstalk policy (default: line)");
    add_engine_flags(simulate, sim);

    Common eq;
    auto *eqcheck = app.add_subcommand("eqcheck", "Jamiolkowski fidelity of a noisy circuit against an ideal one");
    eqcheck->add_option("--ideal", eq.ideal, "Noiseless reference circuit")->required();
    eqcheck->add_option("--circuit", eq.circuit, "Noisy circuit")->required();
    eqcheck->add_option("--mode", eq.mode, "exact | approx | dense");
    eqcheck->add_option("--level", eq.level, "Approximation level l");
    eqcheck->add_flag("--exact", eq.exact, "Full contraction");
    eqcheck->add_option("--threshold", eq.threshold, "Equivalence threshold tau (default 0.99)");
    eqcheck->add_flag("--sweep", eq.sweep, "Report every level 0..l next to the exact value");
    eqcheck->add_option("--seed", eq.seed, "Seed for randomized policies");
    eqcheck->add_option("--policy", eq.policy, "Noise policy applied to --circuit");
    eqcheck->add_option("--graph", eq.graph, "Coupling graph for the crosstalk policy");
    add_engine_flags(eqcheck, eq);

    std::string spec;
    std::string decompose_out;
    auto *decomp = app.add_subcommand("decompose", "Matrix representation and factor decomposition of a channel");
    decomp->add_option("channel", spec, "Channel, e.g. 'depolarizing(0.01)'")->required();
    decomp->add_option("--out", decompose_out, "Report path (default stdout)");

    GenConfig gen;
    auto *gencmd = app.add_subcommand("gen", "Write a benchmark circuit");
    gencmd->add_option("family", gen.family, "bv | qft | qaoa | random")->required();
    gencmd->add_option("--n", gen.n, "Qubits (data qubits for bv)");
    gencmd->add_option("--secret", gen.secret, "bv secret string (default all ones)");
    gencmd->add_option("--edges", gen.edges, "qaoa edges, e.g. 0-1,1-2 (default: line)");
    gencmd->add_option("--gammas", gen.gammas, "qaoa gamma per layer")->delimiter(',');
    gencmd->add_option("--betas", gen.betas, "qaoa beta per layer")->delimiter(',');
    gencmd->add_option("--rows", gen.rows, "random: grid rows");
    gencmd->add_option("--cols", gen.cols, "random: grid columns");
    gencmd->add_option("--depth", gen.depth, "random: cycles");
    gencmd->add_option("--seed", gen.seed, "Seed for random circuits and policies");
    gencmd->add_option("--policy", gen.policy, "Noise policy to apply");
    gencmd->add_option("--graph", gen.graph, "Coupling graph (crosstalk policy, or qaoa edges)");
    gencmd->add_option("--out", gen.out, "Circuit path (default stdout)");

    BenchConfig bench;
    Common bench_common;
    auto *benchcmd = app.add_subcommand("bench", "Time levels 0..l on a generated noisy benchmark");
    benchcmd->add_option("--family", bench.family, "qaoa | bv | qft | random (default qaoa)");
    benchcmd->add_option("--n", bench.n, "Qubits (default 50)");
    benchcmd->add_option("--noises", bench.noises, "Depolarizing noises placed by random-k (default 20)");
    benchcmd->add_option("--p", bench.p, "Depolarizing parameter (default 0.001)");
    benchcmd->add_option("--level", bench.level, "Highest level (default 2)");
    benchcmd->add_option("--seed", bench.seed, "Placement seed (default 1)");
    benchcmd->add_option("--delta", bench.delta, "Accuracy for the trajectory sample count (default 0.01)");
    add_engine_flags(benchcmd, bench_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*simulate) {
            return cmd_simulate(sim);
        }
        if (*eqcheck) {
            return cmd_eqcheck(eq);
        }
        if (*decomp) {
            return cmd_decompose(spec, decompose_out);
        }
        if (*gencmd) {
            return cmd_gen(gen);
        }
        if (*benchcmd) {
            return cmd_bench(bench, bench_common);
        }
    } catch (const FileParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ValidationError &e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ResourceError &e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
