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
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "discoq/errors.hpp"
#include "discoq/pregroup.hpp"
#include "discoq/rng.hpp"
#include "discoq/textutil.hpp"

namespace discoq {

/// A tokenized sentence with its class label (0 = food, 1 = technology).
struct LabeledSentence {
    std::vector<std::string> tokens;
    int label = 0;

    friend bool operator==(const LabeledSentence&, const LabeledSentence&) = default;
};

using LabeledData = std::vector<LabeledSentence>;

struct DataSplit {
    LabeledData train;
    LabeledData test;
};

inline std::string sentence_text(const std::vector<std::string>& tokens) {
    return join(tokens, " ");
}

/// The built-in 14-word vocabulary. Every noun carries a topic, so each
/// sentence contains at least two topical words; verbs and adjectives split
/// symmetrically between food and technology with one neutral filler each.
/// The food and technology halves mirror each other word-for-word, which
/// keeps the generated classes exactly balanced.
inline Lexicon default_lexicon() {
    Lexicon lex;
    auto add = [&lex](const char* w, WordCategory c, Topic t) {
        lex.emplace(w, make_entry(w, c, t));
    };
    add("man", WordCategory::Noun, Topic::Food);
    add("meal", WordCategory::Noun, Topic::Food);
    add("dinner", WordCategory::Noun, Topic::Food);
    add("sauce", WordCategory::Noun, Topic::Food);
    add("person", WordCategory::Noun, Topic::Tech);
    add("woman", WordCategory::Noun, Topic::Tech);
    add("application", WordCategory::Noun, Topic::Tech);
    add("program", WordCategory::Noun, Topic::Tech);
    add("prepares", WordCategory::TransitiveVerb, Topic::Neutral);
    add("cooks", WordCategory::TransitiveVerb, Topic::Food);
    add("debugs", WordCategory::TransitiveVerb, Topic::Tech);
    add("skillful", WordCategory::Adjective, Topic::Neutral);
    add("tasty", WordCategory::Adjective, Topic::Food);
    add("useful", WordCategory::Adjective, Topic::Tech);
    return lex;
}

/// The four sentence templates of the task.
inline const std::vector<std::vector<WordCategory>>& sentence_templates() {
    static const std::vector<std::vector<WordCategory>> templates = {
        {WordCategory::Noun, WordCategory::TransitiveVerb, WordCategory::Noun},
        {WordCategory::Adjective, WordCategory::Noun, WordCategory::TransitiveVerb,
         WordCategory::Noun},
        {WordCategory::Noun, WordCategory::TransitiveVerb, WordCategory::Adjective,
         WordCategory::Noun},
        {WordCategory::Adjective, WordCategory::Noun, WordCategory::TransitiveVerb,
         WordCategory::Adjective, WordCategory::Noun},
    };
    return templates;
}

namespace detail {

/// Single non-neutral topic of a token list, or no value when the tokens mix
/// topics or are all neutral.
inline std::optional<Topic> sentence_topic(const std::vector<std::string>& tokens,
                                           const Lexicon& lex) {
    std::optional<Topic> topic;
    for (const auto& tok : tokens) {
        const Topic t = lex.at(tok).topic;
        if (t == Topic::Neutral) continue;
        if (topic && *topic != t) return std::nullopt;
        topic = t;
    }
    return topic;
}

inline void enumerate_template(const std::vector<WordCategory>& tmpl,
                               const std::map<WordCategory, std::vector<std::string>>& by_cat,
                               std::vector<std::string>& current,
                               std::vector<std::vector<std::string>>& out) {
    if (current.size() == tmpl.size()) {
        out.push_back(current);
        return;
    }
    for (const auto& w : by_cat.at(tmpl[current.size()])) {
        current.push_back(w);
        enumerate_template(tmpl, by_cat, current, out);
        current.pop_back();
    }
}

}  // namespace detail

/// Every topic-consistent template instantiation, sorted by sentence text.
inline LabeledData enumerate_consistent_sentences(const Lexicon& lex) {
    std::map<WordCategory, std::vector<std::string>> by_cat;
    for (const auto& [word, e] : lex) by_cat[e.category].push_back(word);
    for (auto cat : {WordCategory::Noun, WordCategory::Adjective, WordCategory::TransitiveVerb}) {
        if (!by_cat.count(cat)) {
            throw InsufficientCombinations("lexicon has no " + category_name(cat) + " entries");
        }
    }
    std::vector<std::vector<std::string>> raw;
    for (const auto& tmpl : sentence_templates()) {
        std::vector<std::string> current;
        detail::enumerate_template(tmpl, by_cat, current, raw);
    }
    std::map<std::string, LabeledSentence> pool;
    for (auto& tokens : raw) {
        const auto topic = detail::sentence_topic(tokens, lex);
        if (!topic) continue;
        LabeledSentence s;
        s.label = *topic == Topic::Tech ? 1 : 0;
        s.tokens = std::move(tokens);
        pool.emplace(sentence_text(s.tokens), std::move(s));
    }
    LabeledData out;
    out.reserve(pool.size());
    for (auto& [text, s] : pool) out.push_back(std::move(s));
    return out;
}

/// Samples `n` distinct labeled sentences uniformly (without replacement)
/// from the consistent instantiation pool. Deterministic per seed.
inline LabeledData generate_dataset(const Lexicon& lex, int n, std::uint64_t seed) {
    if (n <= 0) throw Error("dataset size must be positive");
    LabeledData pool = enumerate_consistent_sentences(lex);
    if (static_cast<int>(pool.size()) < n) {
        throw InsufficientCombinations("requested " + std::to_string(n) + " sentences but only " +
                                       std::to_string(pool.size()) +
                                       " distinct consistent instantiations exist");
    }
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i) {
        const std::uint64_t j = i + uniform_index(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(n);
    return pool;
}

/// Stratified train/test split. Each class is shuffled and cut at
/// round(ratio * class size), clamped so both classes appear on both sides.
inline DataSplit split_dataset(const LabeledData& data, double ratio, std::uint64_t seed) {
    if (ratio <= 0.0 || ratio >= 1.0) throw Error("split ratio must lie strictly inside (0, 1)");
    if (data.size() < 4) throw TooSmall("need at least 4 sentences to split");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int y = data[i].label;
        if (y != 0 && y != 1) throw Error("labels must be 0 or 1");
        by_class[y].push_back(i);
    }
    if (by_class[0].size() < 2 || by_class[1].size() < 2) {
        throw TooSmall("each class needs at least 2 sentences to appear in both splits");
    }
    std::mt19937_64 rng(seed);
    DataSplit out;
    for (int y = 0; y < 2; ++y) {
        auto& idx = by_class[y];
        for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
            const std::uint64_t j = i + uniform_index(rng, idx.size() - i);
            std::swap(idx[i], idx[j]);
        }
        auto take = static_cast<std::size_t>(std::lround(ratio * static_cast<double>(idx.size())));
        take = std::clamp<std::size_t>(take, 1, idx.size() - 1);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            (i < take ? out.train : out.test).push_back(data[idx[i]]);
        }
    }
    return out;
}

/// TSV persistence: `label<TAB>sentence`, one line per entry.
inline void save_tsv(std::ostream& out, const LabeledData& data) {
    for (const auto& s : data) out << s.label << '\t' << sentence_text(s.tokens) << '\n';
}

inline void save_tsv_file(const std::string& path, const LabeledData& data) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset file: " + path);
    save_tsv(out, data);
}

inline LabeledData load_tsv(std::istream& in) {
    LabeledData data;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cols = split(line, '\t');
        if (cols.size() != 2 || cols[1].empty()) {
            throw IoError("dataset line " + std::to_string(lineno) +
                          " must be 'label<TAB>sentence': " + line);
        }
        const long long label = parse_int(cols[0], "label at line " + std::to_string(lineno));
        if (label != 0 && label != 1) {
            throw IoError("label at line " + std::to_string(lineno) + " must be 0 or 1");
        }
        LabeledSentence s;
        s.label = static_cast<int>(label);
        for (const auto& tok : split(cols[1], ' ')) {
            if (!tok.empty()) s.tokens.push_back(tok);
        }
        if (s.tokens.empty()) {
            throw IoError("dataset line " + std::to_string(lineno) + " has an empty sentence");
        }
        data.push_back(std::move(s));
    }
    return data;
}

inline LabeledData load_tsv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);
    try {
        return load_tsv(in);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

}  // namespace discoq
