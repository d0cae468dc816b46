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

#include "qnoise/circuit_io.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "qnoise/errors.h"

namespace qnoise {

namespace {

constexpr std::size_t kMaxQubits = std::size_t{1} << 20;

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Cursor {
   public:
    Cursor(std::string_view line, std::size_t line_no) : text_(line), line_(line_no) {
    }

    [[noreturn]] void fail(const std::string &msg) const {
        fail_at(msg, pos_);
    }

    [[noreturn]] void fail_at(const std::string &msg, std::size_t pos) const {
        throw ParseError(msg, line_, pos + 1);
    }

    std::size_t pos() const { return pos_; }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
            pos_++;
        }
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            pos_++;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'" + found());
        }
    }

    void expect_end() {
        if (!at_end()) {
            fail("unexpected trailing input" + found());
        }
    }

    std::string ident() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
            pos_++;
        }
        if (start == pos_) {
            fail("expected a name" + found());
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::uint64_t unsigned_int() {
        skip_ws();
        std::uint64_t v = 0;
        const char *b = text_.data() + pos_;
        const char *e = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr == b) {
            fail("expected a non-negative integer" + found());
        }
        if (ptr < e && is_ident_char(*ptr)) {
            fail("expected a non-negative integer" + found());
        }
        pos_ += static_cast<std::size_t>(ptr - b);
        return v;
    }

    /// Unsigned real literal at the current position (no whitespace skip).
    std::optional<double> raw_number() {
        const char *b = text_.data() + pos_;
        const char *e = text_.data() + text_.size();
        if (b == e || !(std::isdigit(static_cast<unsigned char>(*b)) || *b == '.')) {
            return std::nullopt;
        }
        double v = 0;
        auto [ptr, ec] = std::from_chars(b, e, v, std::chars_format::general);
        if (ec != std::errc() || ptr == b) {
            return std::nullopt;
        }
        pos_ += static_cast<std::size_t>(ptr - b);
        return v;
    }

    double number() {
        skip_ws();
        const std::size_t start = pos_;
        double sign = 1;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            sign = text_[pos_] == '-' ? -1 : 1;
            pos_++;
        }
        auto v = raw_number();
        if (!v || !std::isfinite(*v)) {
            fail_at("expected a finite number" + found_at(start), start);
        }
        return sign * *v;
    }

    /// number | [sign] [number '*'] 'pi' ['/' number]
    double angle() {
        skip_ws();
        const std::size_t start = pos_;
        double sign = 1;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            sign = text_[pos_] == '-' ? -1 : 1;
            pos_++;
        }
        double value = 1;
        bool have_number = false;
        if (auto v = raw_number()) {
            value = *v;
            have_number = true;
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != '*') {
                if (!std::isfinite(value)) {
                    fail_at("angle must be finite", start);
                }
                return sign * value;
            }
            pos_++;
            skip_ws();
        }
        if (text_.substr(pos_, 2) != "pi" || (pos_ + 2 < text_.size() && is_ident_char(text_[pos_ + 2]))) {
            fail_at(have_number ? "expected 'pi' after '*'" : "expected an angle" + found_at(start), pos_);
        }
        pos_ += 2;
        value *= std::numbers::pi;
        if (accept('/')) {
            skip_ws();
            auto d = raw_number();
            if (!d || *d == 0) {
                fail("expected a non-zero divisor");
            }
            value /= *d;
        }
        if (!std::isfinite(value)) {
            fail_at("angle must be finite", start);
        }
        return sign * value;
    }

    /// a, bi, a+bi, a-bi (also i, -i, a+i).
    cplx complex() {
        skip_ws();
        const std::size_t start = pos_;
        auto signed_part = [&](bool required) -> std::optional<double> {
            double sign = 1;
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
                sign = text_[pos_] == '-' ? -1 : 1;
                pos_++;
            } else if (!required) {
                return std::nullopt;
            }
            if (auto v = raw_number()) {
                return sign * *v;
            }
            if (pos_ < text_.size() && text_[pos_] == 'i') {
                return sign;  // bare i; the caller consumes the 'i'
            }
            fail_at("expected a complex number" + found_at(start), start);
        };
        const double first = *signed_part(true);
        cplx result;
        if (pos_ < text_.size() && text_[pos_] == 'i') {
            pos_++;
            result = cplx(0, first);
        } else {
            result = cplx(first, 0);
            if (auto second = signed_part(false)) {
                if (pos_ >= text_.size() || text_[pos_] != 'i') {
                    fail("expected 'i' after imaginary part");
                }
                pos_++;
                result = cplx(first, *second);
            }
        }
        if (pos_ < text_.size() && is_ident_char(text_[pos_])) {
            fail_at("malformed complex number" + found_at(start), start);
        }
        if (!std::isfinite(result.real()) || !std::isfinite(result.imag())) {
            fail_at("complex entries must be finite", start);
        }
        return result;
    }

    ComplexMatrix matrix(std::size_t dim) {
        expect('[');
        std::vector<cplx> entries;
        while (true) {
            accept(',');
            if (accept(']')) {
                break;
            }
            if (at_end()) {
                fail("unterminated matrix");
            }
            if (entries.size() == dim * dim) {
                fail("too many matrix entries (expected " + std::to_string(dim * dim) + ")");
            }
            entries.push_back(complex());
        }
        if (entries.size() != dim * dim) {
            fail("expected " + std::to_string(dim * dim) + " matrix entries, got " + std::to_string(entries.size()));
        }
        return ComplexMatrix(dim, dim, std::move(entries));
    }

    Qubit qubit(std::size_t n_qubits) {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ >= text_.size() || text_[pos_] != 'q') {
            fail("expected a qubit like q0" + found());
        }
        pos_++;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            fail_at("expected a qubit like q0" + found_at(start), start);
        }
        const std::uint64_t q = unsigned_int();
        if (q >= n_qubits) {
            fail_at("qubit q" + std::to_string(q) + " out of range for " + std::to_string(n_qubits) + " qubits", start);
        }
        return static_cast<Qubit>(q);
    }

    std::vector<Qubit> qubits(std::size_t n_qubits, std::size_t count) {
        std::vector<Qubit> out;
        for (std::size_t k = 0; k < count; k++) {
            const std::size_t start = (skip_ws(), pos_);
            const Qubit q = qubit(n_qubits);
            for (Qubit prev : out) {
                if (prev == q) {
                    fail_at("duplicate qubit q" + std::to_string(q), start);
                }
            }
            out.push_back(q);
        }
        return out;
    }

    std::string found() {
        return found_at(pos_);
    }

    std::string found_at(std::size_t at) const {
        if (at >= text_.size()) {
            return ", found end of line";
        }
        std::size_t end = at;
        while (end < text_.size() && end - at < 12 && text_[end] != ' ' && text_[end] != '\t') {
            end++;
        }
        if (end == at) {
            end++;
        }
        return ", found '" + std::string(text_.substr(at, end - at)) + "'";
    }

   private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

std::vector<double> parenthesized_args(Cursor &cur) {
    std::vector<double> args;
    cur.expect('(');
    if (cur.accept(')')) {
        return args;
    }
    while (true) {
        args.push_back(cur.angle());
        if (cur.accept(')')) {
            return args;
        }
        cur.expect(',');
    }
}

KrausChannel catalog_channel(Cursor &cur) {
    const std::size_t start = (cur.skip_ws(), cur.pos());
    const std::string name = cur.ident();
    const std::vector<double> args = parenthesized_args(cur);
    auto want = [&](std::size_t n) {
        if (args.size() != n) {
            cur.fail_at(name + " takes " + std::to_string(n) + " argument(s), got " + std::to_string(args.size()), start);
        }
    };
    try {
        if (name == "depolarizing") {
            want(1);
            return depolarizing(args[0]);
        }
        if (name == "depolarizing2") {
            want(1);
            return two_qubit_depolarizing(args[0]);
        }
        if (name == "decoherence") {
            want(3);
            return decoherence(Microseconds(args[0]), Microseconds(args[1]), Nanoseconds(args[2]));
        }
        if (name == "amplitude_damping") {
            want(2);
            return amplitude_damping(Microseconds(args[0]), Nanoseconds(args[1]));
        }
        if (name == "phase_damping") {
            want(3);
            return phase_damping(Microseconds(args[0]), Microseconds(args[1]), Nanoseconds(args[2]));
        }
        if (name == "zz") {
            want(1);
            return zz_crosstalk(args[0]);
        }
    } catch (const ValidationError &e) {
        cur.fail_at(e.what(), start);
    }
    cur.fail_at("unknown channel '" + name + "'", start);
}

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    static constexpr GateKind kAll[] = {GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::H,  GateKind::S,
                                        GateKind::T,  GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::CX,
                                        GateKind::CZ, GateKind::ZZ, GateKind::U1, GateKind::U2};
    for (GateKind k : kAll) {
        if (gate_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

bool unitary_within(const ComplexMatrix &m, double tol) {
    return frobenius_distance(m.adjoint() * m, ComplexMatrix::identity(m.rows())) <= tol;
}

Gate parse_gate(Cursor &cur, const std::string &name, std::size_t name_pos, std::size_t n_qubits) {
    const auto kind = gate_kind_from_name(name);
    if (!kind) {
        cur.fail_at("unknown gate '" + name + "'", name_pos);
    }
    Gate g;
    g.kind = *kind;
    if (gate_has_angle(*kind)) {
        const std::vector<double> args = parenthesized_args(cur);
        if (args.size() != 1) {
            cur.fail_at(name + " takes one angle", name_pos);
        }
        g.angle = args[0];
    } else if (cur.peek() == '(') {
        cur.fail(name + " takes no parameters");
    }
    g.qubits = cur.qubits(n_qubits, static_cast<std::size_t>(gate_arity(*kind)));
    if (*kind == GateKind::U1 || *kind == GateKind::U2) {
        const std::size_t at = (cur.skip_ws(), cur.pos());
        g.custom = cur.matrix(*kind == GateKind::U1 ? 2 : 4);
        if (!unitary_within(g.custom, 1e-8)) {
            cur.fail_at("matrix is not unitary", at);
        }
    }
    return g;
}

NoiseOp parse_noise(Cursor &cur, std::size_t n_qubits) {
    NoiseOp op;
    Cursor lookahead = cur;
    if (lookahead.peek() == 'k' && lookahead.ident() == "kraus") {
        cur = lookahead;
        while (cur.peek() == 'q') {
            const std::size_t at = (cur.skip_ws(), cur.pos());
            const Qubit q = cur.qubit(n_qubits);
            for (Qubit prev : op.qubits) {
                if (prev == q) {
                    cur.fail_at("duplicate qubit q" + std::to_string(q), at);
                }
            }
            op.qubits.push_back(q);
        }
        if (op.qubits.empty() || op.qubits.size() > 2) {
            cur.fail("kraus noise acts on 1 or 2 qubits");
        }
        const std::size_t dim = std::size_t{1} << op.qubits.size();
        const std::size_t at = (cur.skip_ws(), cur.pos());
        std::vector<ComplexMatrix> kraus;
        cur.expect('[');
        while (!cur.accept(']')) {
            cur.accept(',');
            if (cur.peek() == ']') {
                continue;
            }
            if (cur.at_end()) {
                cur.fail("unterminated kraus list");
            }
            kraus.push_back(cur.matrix(dim));
        }
        if (kraus.empty()) {
            cur.fail_at("kraus list is empty", at);
        }
        try {
            op.channel = KrausChannel::from_kraus(static_cast<int>(op.qubits.size()), std::move(kraus));
        } catch (const ValidationError &e) {
            cur.fail_at(e.what(), at);
        }
        return op;
    }
    op.channel = catalog_channel(cur);
    op.qubits = cur.qubits(n_qubits, static_cast<std::size_t>(op.channel.arity));
    return op;
}

std::string_view strip_comment(std::string_view line) {
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) {
        line = line.substr(0, hash);
    }
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

}  // namespace

NoisyCircuit parse_circuit(std::string_view text) {
    NoisyCircuit c;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t offset = 0;
    while (offset <= text.size()) {
        std::size_t end = text.find('\n', offset);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const std::string_view line = strip_comment(text.substr(offset, end - offset));
        offset = end + 1;
        line_no++;
        Cursor cur(line, line_no);
        if (cur.at_end()) {
            continue;
        }
        const std::size_t name_pos = cur.pos();
        const std::string word = cur.ident();
        if (!have_header) {
            if (word != "qubits") {
                cur.fail_at("expected 'qubits <n>' header", name_pos);
            }
            const std::size_t at = (cur.skip_ws(), cur.pos());
            const std::uint64_t n = cur.unsigned_int();
            if (n > kMaxQubits) {
                cur.fail_at("qubit count too large", at);
            }
            c.n_qubits = static_cast<std::size_t>(n);
            cur.expect_end();
            have_header = true;
            continue;
        }
        if (word == "qubits") {
            cur.fail_at("duplicate 'qubits' header", name_pos);
        }
        if (word == "noise") {
            c.elements.emplace_back(parse_noise(cur, c.n_qubits));
        } else {
            c.elements.emplace_back(parse_gate(cur, word, name_pos, c.n_qubits));
        }
        cur.expect_end();
    }
    if (!have_header) {
        throw ParseError("missing 'qubits <n>' header", line_no, 1);
    }
    return c;
}

KrausChannel parse_channel_spec(std::string_view text) {
    Cursor cur(text, 1);
    KrausChannel ch = catalog_channel(cur);
    cur.expect_end();
    return ch;
}

std::string format_complex(cplx z) {
    std::string out = format_double(z.real());
    if (std::signbit(z.imag())) {
        out += "-" + format_double(-z.imag());
    } else {
        out += "+" + format_double(z.imag());
    }
    return out + "i";
}

namespace {

void append_matrix(std::string &out, const ComplexMatrix &m) {
    out += '[';
    for (std::size_t k = 0; k < m.entries().size(); k++) {
        if (k > 0) {
            out += ' ';
        }
        out += format_complex(m.entries()[k]);
    }
    out += ']';
}

void append_qubits(std::string &out, const std::vector<Qubit> &qubits) {
    for (Qubit q : qubits) {
        out += " q" + std::to_string(q);
    }
}

bool label_recreates(const KrausChannel &ch) {
    if (ch.label.empty() || ch.label == "kraus") {
        return false;
    }
    try {
        return parse_channel_spec(ch.label) == ch;
    } catch (const std::exception &) {
        return false;
    }
}

}  // namespace

std::string emit_circuit(const NoisyCircuit &c) {
    std::string out;
    if (!c.name.empty()) {
        out += "# " + c.name + "\n";
    }
    out += "qubits " + std::to_string(c.n_qubits) + "\n";
    for (const auto &e : c.elements) {
        if (const auto *g = std::get_if<Gate>(&e)) {
            out += gate_name(g->kind);
            if (gate_has_angle(g->kind)) {
                out += "(" + format_double(g->angle) + ")";
            }
            append_qubits(out, g->qubits);
            if (g->kind == GateKind::U1 || g->kind == GateKind::U2) {
                out += ' ';
                append_matrix(out, g->custom);
            }
        } else {
            const auto &op = std::get<NoiseOp>(e);
            out += "noise ";
            if (label_recreates(op.channel)) {
                out += op.channel.label;
                append_qubits(out, op.qubits);
            } else {
                out += "kraus";
                append_qubits(out, op.qubits);
                out += " [";
                for (std::size_t k = 0; k < op.channel.kraus.size(); k++) {
                    if (k > 0) {
                        out += ' ';
                    }
                    append_matrix(out, op.channel.kraus[k]);
                }
                out += ']';
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace qnoise
