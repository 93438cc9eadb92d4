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

// Walkthrough of the library on two sentences: parse, compile to a circuit,
// bind random embeddings, read the sentence-qubit distribution, and compare
// the two kernels. Takes sentences as (quoted) argv, or uses defaults.

#include <cstdio>
#include <string>
#include <vector>

#include "discoq/dataset.hpp"
#include "discoq/embeddings.hpp"
#include "discoq/kernels.hpp"
#include "discoq/textutil.hpp"

using namespace discoq;

int main(int argc, char** argv) {
    const std::string text_a = argc > 1 ? argv[1] : "skillful man prepares tasty meal";
    const std::string text_b = argc > 2 ? argv[2] : "woman prepares useful application";

    const Lexicon lex = default_lexicon();
    const EmbeddingStore store = init_embeddings(lex, AnsatzConfig{}, 1);

    for (const std::string& text : {text_a, text_b}) {
        const Diagram d = parse_sentence(split(text, ' '), lex);
        std::printf("\"%s\"\n", text.c_str());
        std::printf("  wires: %zu, cups: %zu, reduces to s: %s\n", d.wires.size(),
                    d.cups.size(), reduces_to_sentence(d) ? "yes" : "no");

        const Circuit c = discoq::bind(compile_diagram(d, AnsatzConfig{}), store.params);
        std::printf("  circuit: %d qubits, %zu gates, %zu post-selections\n", c.n_qubits(),
                    c.gates().size(), c.post_select().size());

        const PostSelectedDistribution dist = run_exact(c);
        std::printf("  post-selection success: %.4f\n", dist.success_prob);
        for (const auto& [key, p] : dist.probs) {
            std::printf("  P(s = %s) = %.4f\n", key.c_str(), p);
        }
    }

    const Diagram da = parse_sentence(split(text_a, ' '), lex);
    const Diagram db = parse_sentence(split(text_b, ' '), lex);
    const Backend exact = Backend::exact();
    std::printf("swap-test kernel:            %.6f\n", swap_test_kernel(da, db, store, exact));
    std::printf("transition-amplitude kernel: %.6f\n",
                transition_amplitude_kernel(da, db, store, exact));
    return 0;
}
