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
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "discoq/errors.hpp"

namespace discoq {

/// Pregroup basic types. The task grammar only needs nouns and sentences.
enum class Base { N, S };

/// A basic type together with its adjoint order:
/// -1 = left adjoint (x.l), 0 = plain (x), +1 = right adjoint (x.r).
struct SimpleType {
    Base base = Base::N;
    int adjoint_order = 0;

    friend bool operator==(const SimpleType&, const SimpleType&) = default;
};

using PregroupType = std::vector<SimpleType>;

inline std::string to_string(const SimpleType& t) {
    std::string s = t.base == Base::N ? "n" : "s";
    if (t.adjoint_order < 0) s += ".l";
    if (t.adjoint_order > 0) s += ".r";
    return s;
}

/// Two adjacent wires cancel when the right one is the right adjoint of the
/// left one (x . x.r) or the left one is the left adjoint of the right one
/// (x.l . x). Both cases read: same base, right order = left order + 1.
inline bool cancels(const SimpleType& left, const SimpleType& right) {
    return left.base == right.base && right.adjoint_order == left.adjoint_order + 1;
}

enum class WordCategory { Noun, Adjective, TransitiveVerb };

/// Topic tag used by the dataset generator; the parser ignores it.
enum class Topic { Neutral, Food, Tech };

inline PregroupType type_of(WordCategory c) {
    switch (c) {
        case WordCategory::Noun:
            return {{Base::N, 0}};
        case WordCategory::Adjective:
            return {{Base::N, 0}, {Base::N, -1}};
        case WordCategory::TransitiveVerb:
            return {{Base::N, 1}, {Base::S, 0}, {Base::N, -1}};
    }
    throw Error("unreachable word category");
}

/// Parameter count of a word box under the single-layer 1-qubit-per-wire
/// ansatz: a 1-wire box carries 3 Euler angles, a k-wire box carries k-1
/// entangling angles.
inline int param_count_of(WordCategory c) {
    switch (c) {
        case WordCategory::Noun:
            return 3;
        case WordCategory::Adjective:
            return 1;
        case WordCategory::TransitiveVerb:
            return 2;
    }
    throw Error("unreachable word category");
}

struct LexiconEntry {
    std::string word;
    WordCategory category = WordCategory::Noun;
    Topic topic = Topic::Neutral;
    int param_count = 3;
    PregroupType type;
};

inline LexiconEntry make_entry(std::string word, WordCategory c, Topic t = Topic::Neutral) {
    LexiconEntry e;
    e.word = std::move(word);
    e.category = c;
    e.topic = t;
    e.param_count = param_count_of(c);
    e.type = type_of(c);
    return e;
}

/// Word -> entry, ordered so that iteration over the lexicon is deterministic.
using Lexicon = std::map<std::string, LexiconEntry>;

/// One word box in a diagram: the token plus the wire types it contributes.
struct WordBox {
    std::string word;
    PregroupType type;

    friend bool operator==(const WordBox&, const WordBox&) = default;
};

/// A parsed sentence diagram. `wires` is the concatenation of every word's
/// type, `cups` are index pairs into that list (left < right), `open_wires`
/// are the indices not consumed by any cup.
struct Diagram {
    std::vector<WordBox> words;
    std::vector<SimpleType> wires;
    std::vector<std::pair<int, int>> cups;
    std::vector<int> open_wires;

    friend bool operator==(const Diagram&, const Diagram&) = default;
};

/// Start index of each word's wire block inside the concatenated wire list.
inline std::vector<int> word_wire_offsets(const Diagram& d) {
    std::vector<int> offsets;
    offsets.reserve(d.words.size());
    int at = 0;
    for (const auto& w : d.words) {
        offsets.push_back(at);
        at += static_cast<int>(w.type.size());
    }
    return offsets;
}

namespace detail {

/// Iterated adjacent-adjoint cancellation over the concatenated wire list.
/// A stack walk finds the planar cup set in one left-to-right pass: a new
/// wire either cancels the most recent surviving wire or survives itself.
inline void reduce_wires(const std::vector<SimpleType>& wires,
                         std::vector<std::pair<int, int>>& cups,
                         std::vector<int>& open_wires) {
    cups.clear();
    open_wires.clear();
    std::vector<int> stack;
    for (int i = 0; i < static_cast<int>(wires.size()); ++i) {
        if (!stack.empty() && cancels(wires[stack.back()], wires[i])) {
            cups.emplace_back(stack.back(), i);
            stack.pop_back();
        } else {
            stack.push_back(i);
        }
    }
    open_wires = std::move(stack);
}

}  // namespace detail

/// Parses a token sequence into a sentence diagram.
///
/// Throws UnknownWord for tokens missing from the lexicon and NoReduction if
/// cancellation does not terminate with exactly one open wire of type s.
inline Diagram parse_sentence(const std::vector<std::string>& tokens, const Lexicon& lexicon) {
    Diagram d;
    for (const auto& tok : tokens) {
        auto it = lexicon.find(tok);
        if (it == lexicon.end()) throw UnknownWord("unknown word: " + tok);
        d.words.push_back({tok, it->second.type});
        d.wires.insert(d.wires.end(), it->second.type.begin(), it->second.type.end());
    }
    detail::reduce_wires(d.wires, d.cups, d.open_wires);
    if (d.open_wires.size() != 1 || !(d.wires[d.open_wires[0]] == SimpleType{Base::S, 0})) {
        std::string joined;
        for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t;
        throw NoReduction("token sequence does not reduce to a sentence: " + joined);
    }
    return d;
}

/// Pure check that a diagram is a well-formed sentence: every wire is either
/// in exactly one cup or open, cups connect cancelling wire pairs without
/// crossing, and exactly one open wire of type s remains.
inline bool reduces_to_sentence(const Diagram& d) {
    const int n = static_cast<int>(d.wires.size());
    std::vector<int> uses(n, 0);
    for (const auto& [l, r] : d.cups) {
        if (l < 0 || r >= n || l >= r) return false;
        if (!cancels(d.wires[l], d.wires[r])) return false;
        ++uses[l];
        ++uses[r];
    }
    for (int w : d.open_wires) {
        if (w < 0 || w >= n) return false;
        ++uses[w];
    }
    for (int u : uses) {
        if (u != 1) return false;
    }
    for (std::size_t i = 0; i < d.cups.size(); ++i) {
        for (std::size_t j = i + 1; j < d.cups.size(); ++j) {
            auto [a, b] = d.cups[i];
            auto [c, e] = d.cups[j];
            const bool crossing = (a < c && c < b && b < e) || (c < a && a < e && e < b);
            if (crossing) return false;
        }
    }
    if (d.open_wires.size() != 1) return false;
    return d.wires[d.open_wires[0]] == SimpleType{Base::S, 0};
}

inline std::string category_name(WordCategory c) {
    switch (c) {
        case WordCategory::Noun:
            return "noun";
        case WordCategory::Adjective:
            return "adj";
        case WordCategory::TransitiveVerb:
            return "tverb";
    }
    throw Error("unreachable word category");
}

inline WordCategory category_from_name(const std::string& name) {
    if (name == "noun") return WordCategory::Noun;
    if (name == "adj") return WordCategory::Adjective;
    if (name == "tverb") return WordCategory::TransitiveVerb;
    throw IoError("unknown word category: " + name);
}

inline std::string topic_name(Topic t) {
    switch (t) {
        case Topic::Neutral:
            return "neutral";
        case Topic::Food:
            return "food";
        case Topic::Tech:
            return "tech";
    }
    throw Error("unreachable topic");
}

inline Topic topic_from_name(const std::string& name) {
    if (name == "neutral") return Topic::Neutral;
    if (name == "food") return Topic::Food;
    if (name == "tech") return Topic::Tech;
    throw IoError("unknown topic: " + name);
}

/// Loads a lexicon from tab-separated lines `word<TAB>category[<TAB>topic]`.
/// Lines starting with '#' and blank lines are skipped.
inline Lexicon load_lexicon(std::istream& in) {
    Lexicon lex;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, '\t')) cols.push_back(col);
        if (cols.size() < 2 || cols.size() > 3 || cols[0].empty()) {
            throw IoError("lexicon line " + std::to_string(lineno) + " is malformed: " + line);
        }
        LexiconEntry e = make_entry(cols[0], category_from_name(cols[1]),
                                    cols.size() == 3 ? topic_from_name(cols[2]) : Topic::Neutral);
        if (!lex.emplace(e.word, std::move(e)).second) {
            throw IoError("duplicate lexicon word at line " + std::to_string(lineno) + ": " + cols[0]);
        }
    }
    return lex;
}

inline Lexicon load_lexicon_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon file: " + path);
    return load_lexicon(in);
}

inline void save_lexicon(std::ostream& out, const Lexicon& lex) {
    for (const auto& [word, e] : lex) {
        out << word << '\t' << category_name(e.category) << '\t' << topic_name(e.topic) << '\n';
    }
}

inline void save_lexicon_file(const std::string& path, const Lexicon& lex) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write lexicon file: " + path);
    save_lexicon(out, lex);
}

/// Stable 64-bit FNV-1a hash of the lexicon's word/category pairs. Embedding
/// files record it so parameters are never mixed across vocabularies.
inline std::uint64_t lexicon_hash(const Lexicon& lex) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0x1f;
        h *= 0x100000001b3ULL;
    };
    for (const auto& [word, e] : lex) {
        feed(word);
        feed(category_name(e.category));
    }
    return h;
}

}  // namespace discoq
