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

#include <stdexcept>
#include <string>

namespace discoq {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define DISCOQ_DEFINE_ERROR(NAME)                                  \
    struct NAME : Error {                                          \
        explicit NAME(const std::string& msg) : Error(msg) {}      \
    }

// Grammar / parsing.
DISCOQ_DEFINE_ERROR(UnknownWord);
DISCOQ_DEFINE_ERROR(NoReduction);

// Circuit construction.
DISCOQ_DEFINE_ERROR(UnsupportedAnsatz);
DISCOQ_DEFINE_ERROR(DiagramNotSentence);
DISCOQ_DEFINE_ERROR(MissingSymbol);
DISCOQ_DEFINE_ERROR(PostSelectConflict);
DISCOQ_DEFINE_ERROR(WireMapNotInjective);

// Simulation.
DISCOQ_DEFINE_ERROR(UnboundCircuit);
DISCOQ_DEFINE_ERROR(PostSelectImpossible);
DISCOQ_DEFINE_ERROR(TooManyQubits);

// Training / prediction.
DISCOQ_DEFINE_ERROR(PredictionFailed);
DISCOQ_DEFINE_ERROR(EmptyDataset);

// Kernels and Gram matrices.
DISCOQ_DEFINE_ERROR(KernelEvalFailed);
DISCOQ_DEFINE_ERROR(NotSquare);
DISCOQ_DEFINE_ERROR(LengthMismatch);

// SVM.
DISCOQ_DEFINE_ERROR(DegenerateLabels);
DISCOQ_DEFINE_ERROR(TooLarge);

// Dataset generation.
DISCOQ_DEFINE_ERROR(InsufficientCombinations);
DISCOQ_DEFINE_ERROR(TooSmall);

// Command line / configuration.
DISCOQ_DEFINE_ERROR(ConfigError);
DISCOQ_DEFINE_ERROR(IoError);

#undef DISCOQ_DEFINE_ERROR

}  // namespace discoq
