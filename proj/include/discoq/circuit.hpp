// Copyright 2026 The discoq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "discoq/errors.hpp"
#include "discoq/pregroup.hpp"
#include "discoq/textutil.hpp"

namespace discoq {

enum class GateKind { H, RX, RZ, CRZ, CX, CSWAP };

inline int gate_arity(GateKind k) {
    switch (k) {
        case GateKind::H:
        case GateKind::RX:
        case GateKind::RZ:
            return 1;
        case GateKind::CRZ:
        case GateKind::CX:
            return 2;
        case GateKind::CSWAP:
            return 3;
    }
    throw Error("unreachable gate kind");
}

inline bool gate_has_angle(GateKind k) {
    return k == GateKind::RX || k == GateKind::RZ || k == GateKind::CRZ;
}

inline std::string gate_name(GateKind k) {
    switch (k) {
        case GateKind::H:
            return "H";
        case GateKind::RX:
            return "RX";
        case GateKind::RZ:
            return "RZ";
        case GateKind::CRZ:
            return "CRZ";
        case GateKind::CX:
            return "CX";
        case GateKind::CSWAP:
            return "CSWAP";
    }
    throw Error("unreachable gate kind");
}

/// Named parameter reference. `negated` carries the sign flip introduced by
/// adjoint() so symbolic circuits stay invertible before binding.
struct SymbolRef {
    std::string name;
    bool negated = false;

    friend bool operator==(const SymbolRef&, const SymbolRef&) = default;
};

/// Rotation angle: no angle (H/CX/CSWAP), bound radians, or named symbol.
using Angle = std::variant<std::monostate, double, SymbolRef>;

struct Gate {
    GateKind kind = GateKind::H;
    std::array<int, 3> qubits{-1, -1, -1};
    Angle angle{};

    int arity() const { return gate_arity(kind); }

    friend bool operator==(const Gate&, const Gate&) = default;

    static Gate h(int q) { return make(GateKind::H, {q, -1, -1}, {}); }
    static Gate rx(int q, Angle a) { return make(GateKind::RX, {q, -1, -1}, std::move(a)); }
    static Gate rz(int q, Angle a) { return make(GateKind::RZ, {q, -1, -1}, std::move(a)); }
    static Gate crz(int control, int target, Angle a) {
        return make(GateKind::CRZ, {control, target, -1}, std::move(a));
    }
    static Gate cx(int control, int target) {
        return make(GateKind::CX, {control, target, -1}, {});
    }
    static Gate cswap(int control, int t1, int t2) {
        return make(GateKind::CSWAP, {control, t1, t2}, {});
    }

  private:
    static Gate make(GateKind kind, std::array<int, 3> qs, Angle a) {
        Gate g;
        g.kind = kind;
        g.qubits = qs;
        g.angle = std::move(a);
        const int n = gate_arity(kind);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (qs[i] == qs[j]) throw Error(gate_name(kind) + " qubits must be distinct");
            }
        }
        if (gate_has_angle(kind) == std::holds_alternative<std::monostate>(g.angle)) {
            throw Error(gate_name(kind) + ": angle presence does not match gate kind");
        }
        return g;
    }
};

/// Name -> radians binding for symbolic circuit parameters.
using ParameterMap = std::map<std::string, double>;

/// Flat gate-list circuit with post-selection annotations.
///
/// Post-selection is an end-of-circuit annotation: `post_select` maps qubit to
/// the classical bit it must read out as. `sentence_qubits` mark the wires
/// whose outcome distribution the caller is interested in; they are always
/// disjoint from post-selected qubits.
class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(int n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 0) throw Error("negative qubit count");
    }

    int n_qubits() const { return n_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const std::map<int, int>& post_select() const { return post_select_; }
    const std::vector<int>& sentence_qubits() const { return sentence_qubits_; }
    const std::set<std::string>& free_symbols() const { return free_symbols_; }
    bool is_bound() const { return free_symbols_.empty(); }

    void add_qubits(int count) {
        if (count < 0) throw Error("negative qubit count");
        n_qubits_ += count;
    }

    void add_gate(Gate g) {
        for (int i = 0; i < g.arity(); ++i) {
            if (g.qubits[i] < 0 || g.qubits[i] >= n_qubits_) {
                throw Error(gate_name(g.kind) + " targets qubit out of range");
            }
        }
        if (const auto* sym = std::get_if<SymbolRef>(&g.angle)) {
            free_symbols_.insert(sym->name);
        }
        gates_.push_back(std::move(g));
    }

    void post_select_qubit(int q, int bit) {
        if (q < 0 || q >= n_qubits_) throw Error("post-selected qubit out of range");
        if (bit != 0 && bit != 1) throw Error("post-selection bit must be 0 or 1");
        auto it = post_select_.find(q);
        if (it != post_select_.end() && it->second != bit) {
            throw PostSelectConflict("qubit " + std::to_string(q) +
                                     " post-selected on both bit values");
        }
        if (std::count(sentence_qubits_.begin(), sentence_qubits_.end(), q)) {
            throw PostSelectConflict("qubit " + std::to_string(q) +
                                     " is a sentence qubit and cannot be post-selected");
        }
        post_select_[q] = bit;
    }

    void set_sentence_qubits(std::vector<int> qs) {
        std::set<int> seen;
        for (int q : qs) {
            if (q < 0 || q >= n_qubits_) throw Error("sentence qubit out of range");
            if (!seen.insert(q).second) throw Error("duplicate sentence qubit");
            if (post_select_.count(q)) {
                throw PostSelectConflict("qubit " + std::to_string(q) +
                                         " is post-selected and cannot be a sentence qubit");
            }
        }
        sentence_qubits_ = std::move(qs);
    }

    void clear_post_select() { post_select_.clear(); }
    void clear_sentence_qubits() { sentence_qubits_.clear(); }

    friend bool operator==(const Circuit&, const Circuit&) = default;

  private:
    int n_qubits_ = 0;
    std::vector<Gate> gates_;
    std::map<int, int> post_select_;
    std::vector<int> sentence_qubits_;
    std::set<std::string> free_symbols_;
};

/// Single-layer instantaneous-polynomial ansatz configuration. Only the
/// 1-qubit-per-wire single-layer shape is implemented.
struct AnsatzConfig {
    int q_n = 1;
    int q_s = 1;
    int layers = 1;

    void validate() const {
        if (q_n != 1 || q_s != 1 || layers != 1) {
            throw UnsupportedAnsatz("only q_n=1, q_s=1, layers=1 is supported");
        }
    }

    friend bool operator==(const AnsatzConfig&, const AnsatzConfig&) = default;
};

inline std::string symbol_name(const std::string& word, int index) {
    return word + "__" + std::to_string(index);
}

/// Lowers a sentence diagram to a circuit.
///
/// Wire i of the diagram becomes qubit i (|0> initialized). Word boxes come
/// first in sentence order: a 1-wire box is RX, RZ, RX with three fresh
/// symbols, a k-wire box is H on each of its qubits followed by a CRZ ladder
/// over adjacent pairs with k-1 symbols. Cups are lowered to Bell effects
/// (CX left->right, H on left, both post-selected to 0). Open wires become
/// sentence qubits. Symbols are named `<word>__<index>` so repeated words
/// share parameters across boxes and sentences.
inline Circuit compile_diagram(const Diagram& d, const AnsatzConfig& ansatz) {
    ansatz.validate();
    if (!reduces_to_sentence(d)) {
        throw DiagramNotSentence("diagram does not reduce to a single s wire");
    }
    Circuit c(static_cast<int>(d.wires.size()));
    const std::vector<int> offsets = word_wire_offsets(d);
    for (std::size_t w = 0; w < d.words.size(); ++w) {
        const auto& box = d.words[w];
        const int base = offsets[w];
        const int k = static_cast<int>(box.type.size());
        if (k == 1) {
            c.add_gate(Gate::rx(base, SymbolRef{symbol_name(box.word, 0)}));
            c.add_gate(Gate::rz(base, SymbolRef{symbol_name(box.word, 1)}));
            c.add_gate(Gate::rx(base, SymbolRef{symbol_name(box.word, 2)}));
        } else {
            for (int q = 0; q < k; ++q) c.add_gate(Gate::h(base + q));
            for (int j = 0; j + 1 < k; ++j) {
                c.add_gate(Gate::crz(base + j, base + j + 1, SymbolRef{symbol_name(box.word, j)}));
            }
        }
    }
    std::vector<std::pair<int, int>> cups = d.cups;
    std::sort(cups.begin(), cups.end());
    for (const auto& [l, r] : cups) {
        c.add_gate(Gate::cx(l, r));
        c.add_gate(Gate::h(l));
    }
    c.set_sentence_qubits(d.open_wires);
    for (const auto& [l, r] : cups) {
        c.post_select_qubit(l, 0);
        c.post_select_qubit(r, 0);
    }
    return c;
}

/// Replaces every symbolic angle with its bound value (sign applied).
/// Throws MissingSymbol if the map lacks one of the circuit's symbols.
/// Call as discoq::bind — ADL on the map argument pulls in std::bind, whose
/// forwarding references beat this overload for unqualified calls.
inline Circuit bind(const Circuit& c, const ParameterMap& params) {
    Circuit out(c.n_qubits());
    for (const Gate& g : c.gates()) {
        Gate b = g;
        if (const auto* sym = std::get_if<SymbolRef>(&g.angle)) {
            auto it = params.find(sym->name);
            if (it == params.end()) throw MissingSymbol("no value bound for symbol " + sym->name);
            b.angle = sym->negated ? -it->second : it->second;
        }
        out.add_gate(std::move(b));
    }
    out.set_sentence_qubits(c.sentence_qubits());
    for (const auto& [q, bit] : c.post_select()) out.post_select_qubit(q, bit);
    return out;
}

/// Reverses the gate list and negates every rotation angle. H, CX and CSWAP
/// are self-inverse. The result carries no post-selection and no sentence
/// qubits; callers re-derive both for the composed circuit they build.
inline Circuit adjoint(const Circuit& c) {
    Circuit out(c.n_qubits());
    for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
        Gate g = *it;
        if (const auto* v = std::get_if<double>(&g.angle)) {
            g.angle = -*v;
        } else if (auto* sym = std::get_if<SymbolRef>(&g.angle)) {
            sym->negated = !sym->negated;
        }
        out.add_gate(std::move(g));
    }
    return out;
}

/// Appends `b`'s gates to `a`, relocating b's qubits through `wire_map`
/// (b qubit -> composed qubit). Qubits absent from the map keep their index.
/// The effective map must be injective. b's post-selections are carried over
/// through the map; conflicting requirements raise PostSelectConflict. The
/// result keeps a's sentence qubits.
inline Circuit compose(const Circuit& a, const Circuit& b, const std::map<int, int>& wire_map = {}) {
    std::map<int, int> effective;
    for (int q = 0; q < b.n_qubits(); ++q) {
        auto it = wire_map.find(q);
        effective[q] = it == wire_map.end() ? q : it->second;
    }
    for (const auto& [from, to] : wire_map) {
        if (from < 0 || from >= b.n_qubits()) {
            throw Error("wire map source out of range: " + std::to_string(from));
        }
        if (to < 0) throw Error("wire map target out of range: " + std::to_string(to));
    }
    std::set<int> targets;
    for (const auto& [from, to] : effective) {
        if (!targets.insert(to).second) {
            throw WireMapNotInjective("two wires mapped to qubit " + std::to_string(to));
        }
    }
    int n = a.n_qubits();
    for (const auto& [from, to] : effective) n = std::max(n, to + 1);

    Circuit out(n);
    for (const Gate& g : a.gates()) out.add_gate(g);
    for (const Gate& g : b.gates()) {
        Gate m = g;
        for (int i = 0; i < g.arity(); ++i) m.qubits[i] = effective.at(g.qubits[i]);
        out.add_gate(std::move(m));
    }
    out.set_sentence_qubits(a.sentence_qubits());
    for (const auto& [q, bit] : a.post_select()) out.post_select_qubit(q, bit);
    for (const auto& [q, bit] : b.post_select()) out.post_select_qubit(effective.at(q), bit);
    return out;
}

/// Places `b` beside `a` on fresh qubits (b qubit q -> a.n_qubits() + q).
/// Sentence qubits are concatenated, post-selections merged.
inline Circuit parallel(const Circuit& a, const Circuit& b) {
    const int off = a.n_qubits();
    Circuit out(off + b.n_qubits());
    for (const Gate& g : a.gates()) out.add_gate(g);
    for (const Gate& g : b.gates()) {
        Gate m = g;
        for (int i = 0; i < g.arity(); ++i) m.qubits[i] += off;
        out.add_gate(std::move(m));
    }
    std::vector<int> sentence = a.sentence_qubits();
    for (int q : b.sentence_qubits()) sentence.push_back(q + off);
    out.set_sentence_qubits(std::move(sentence));
    for (const auto& [q, bit] : a.post_select()) out.post_select_qubit(q, bit);
    for (const auto& [q, bit] : b.post_select()) out.post_select_qubit(q + off, bit);
    return out;
}

inline std::string format_angle(const Angle& a) {
    if (const auto* v = std::get_if<double>(&a)) return format_double(*v);
    if (const auto* sym = std::get_if<SymbolRef>(&a)) {
        return sym->negated ? "-" + sym->name : sym->name;
    }
    return "";
}

/// Plain-text debug dump: one `KIND q0[,q1[,q2]] [angle|symbol]` line per
/// gate, then `POSTSELECT q=bit` lines, then a `SENTENCE q...` line when the
/// circuit has sentence qubits.
inline std::string dump(const Circuit& c) {
    std::string out;
    for (const Gate& g : c.gates()) {
        out += gate_name(g.kind);
        out += ' ';
        for (int i = 0; i < g.arity(); ++i) {
            if (i) out += ',';
            out += std::to_string(g.qubits[i]);
        }
        const std::string angle = format_angle(g.angle);
        if (!angle.empty()) {
            out += ' ';
            out += angle;
        }
        out += '\n';
    }
    for (const auto& [q, bit] : c.post_select()) {
        out += "POSTSELECT " + std::to_string(q) + "=" + std::to_string(bit) + "\n";
    }
    if (!c.sentence_qubits().empty()) {
        out += "SENTENCE";
        for (int q : c.sentence_qubits()) out += " " + std::to_string(q);
        out += "\n";
    }
    return out;
}

}  // namespace discoq
