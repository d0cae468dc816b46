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

#ifndef QNOISE_TENSORNET_H
#define QNOISE_TENSORNET_H

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qnoise/channels.h"
#include "qnoise/circuit.h"
#include "qnoise/linalg.h"

namespace qnoise {

/// Axis label. Every axis has dimension 2; printable names live in the
/// owning Network.
using Axis = std::uint32_t;

/// Which copy of a doubled network a tensor belongs to. Bridge tensors
/// (unsubstituted noise slots) touch both copies.
enum class Side : std::uint8_t { Ket, Bra, Bridge, Scalar };

/// Dense tensor; data is row-major with axes[0] the slowest index.
struct Tensor {
    std::vector<Axis> axes;
    std::vector<cplx> data;
    Side side = Side::Ket;

    std::size_t rank() const { return axes.size(); }
};

class Network {
   public:
    Axis new_axis(std::string name);
    const std::string &axis_name(Axis a) const { return names_.at(a); }
    std::size_t axis_count() const { return names_.size(); }

    std::size_t add_tensor(Tensor t);
    const std::vector<Tensor> &tensors() const { return tensors_; }
    std::vector<Tensor> &tensors() { return tensors_; }

    /// Tensors holding each axis, indexed by axis id.
    std::vector<std::vector<std::size_t>> bonds() const;
    /// Axes held by exactly one tensor, ascending.
    std::vector<Axis> open_axes() const;
    bool is_closed() const { return open_axes().empty(); }

    /// Throws ValidationError if a label repeats within a tensor, appears on
    /// more than two tensors, or a data size is not 2^rank.
    void validate() const;

   private:
    std::vector<std::string> names_;
    std::vector<Tensor> tensors_;
};

/// A noise channel occupying one bridge tensor with axes
/// (ket_out..., bra_out..., ket_in..., bra_in...).
struct NoiseSlot {
    std::size_t id = 0;
    int arity = 1;
    std::vector<Axis> ket_out, bra_out, ket_in, bra_in;
    /// Index of the bridge tensor, or of the ket factor once substituted.
    std::size_t tensor = 0;
    /// Index of the bra factor once substituted.
    std::size_t bra_tensor = 0;
    bool substituted = false;
};

struct SlottedNetwork {
    Network net;
    std::vector<NoiseSlot> slots;
    /// Boundary vector tensors per qubit (doubled networks only).
    std::vector<std::size_t> ket_in, ket_out, bra_in, bra_out;
};

/// One single-qubit state per qubit: '0', '1', '+', '-', 'r' (|+i>) or
/// 'l' (|-i>).
struct ProductState {
    std::string qubits;

    static ProductState zeros(std::size_t n) { return {std::string(n, '0')}; }
    /// Throws ValidationError for unknown characters.
    void validate() const;
    static std::array<cplx, 2> amplitudes(char c);
};

/// Boundary of a doubled network: |ket_in> and <ket_out| on the ket copy,
/// |bra_in*> and <bra_out*| on the bra copy.
struct DoubledBoundary {
    ProductState ket_in, ket_out, bra_in, bra_out;

    static DoubledBoundary same(const ProductState &psi, const ProductState &v) { return {psi, v, psi, v}; }
};

/// Doubled network computing <v|(x)<v*| M_{E_d}...M_{E_1} |psi>(x)|psi*>.
/// With `append_inverse_ideal`, the inverse of the circuit's gates is
/// appended and adjacent inverse pairs are cancelled first, so that
/// <ket_out| = <psi| yields v = U|psi>.
SlottedNetwork build_doubled_network(const NoisyCircuit &c, const DoubledBoundary &boundary, bool append_inverse_ideal);

/// Network computing Tr((U^H (x) U^T) M_E) for the noisy circuit against
/// the ideal one; each wire is closed into a loop by a delta tensor, and a
/// wire left empty after cancellation contributes a scalar 2. The caller
/// applies the 4^-n normalization.
SlottedNetwork build_fidelity_network(const NoisyCircuit &ideal, const NoisyCircuit &noisy);

/// Replaces the slot's bridge tensor by `factor.ket` on the ket copy and
/// `factor.bra` on the bra copy. Throws ValidationError on double
/// substitution or size mismatch.
SlottedNetwork substitute(SlottedNetwork net, std::size_t slot, const FactorTerm &factor);
void substitute_in_place(SlottedNetwork &net, std::size_t slot, const FactorTerm &factor);

/// Connected components as independent networks (axis ids preserved).
std::vector<Network> split_components(const Network &net);

enum class PathStrategy { Auto, Exhaustive, Greedy };

struct ContractOptions {
    /// Cap on the entry count of any tensor formed during contraction.
    std::size_t memory_budget = std::size_t{1} << 30;
    PathStrategy strategy = PathStrategy::Auto;
};

/// Networks with at most this many tensors use the exhaustive path search
/// under PathStrategy::Auto.
inline constexpr std::size_t kExhaustiveLimit = 14;

/// A contraction order for a fixed network structure, reusable with
/// different tensor data.
class ContractionPlan {
   public:
    /// Plans the contraction of tensors with the given axes. The network
    /// must be closed. `name` renders axes in resource errors.
    static ContractionPlan build(const std::vector<std::vector<Axis>> &leaves, const ContractOptions &options,
                                 const std::function<std::string(Axis)> &name = {});

    /// Contracts leaves whose data is given in the planned order.
    cplx execute(std::span<const std::vector<cplx> *const> leaves) const;

    std::size_t leaf_count() const { return leaf_count_; }
    /// Rank of the largest tensor formed.
    std::size_t max_rank() const { return max_rank_; }
    /// Sum over steps of 2^(axes involved).
    double cost() const { return cost_; }

    struct Step;

   private:
    std::size_t leaf_count_ = 0;
    std::size_t max_rank_ = 0;
    double cost_ = 0;
    std::vector<std::shared_ptr<const Step>> steps_;
    /// Operand ids whose scalars multiply into the final value.
    std::vector<std::size_t> roots_;
};

/// Full contraction of a closed network. Throws ValidationError for open
/// networks and ResourceError past the memory budget.
cplx contract(const Network &net, const ContractOptions &options = {});

}  // namespace qnoise

#endif
