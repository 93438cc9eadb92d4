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
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "discoq/errors.hpp"
#include "discoq/kernels.hpp"
#include "discoq/textutil.hpp"

namespace discoq {

/// Soft-margin kernel SVM state after fitting. Labels are stored in {-1, +1};
/// the public prediction API speaks {0, 1}.
struct SvmModel {
    std::vector<double> alphas;        // dual coefficients in [0, C]
    double bias = 0.0;
    std::vector<int> support_indices;  // indices with alpha > tol
    std::vector<int> labels;           // training labels in {-1, +1}
    double C = 1.0;
    double tol = 1e-3;
    std::vector<double> objective_trace;  // dual objective after each accepted step
};

struct Prediction {
    int label = 0;  // in {0, 1}
    double score = 0.0;
};

inline GramMatrix symmetrized(const GramMatrix& K) {
    if (K.rows != K.cols) throw NotSquare("cannot symmetrize a non-square matrix");
    GramMatrix S = K;
    for (int i = 0; i < K.rows; ++i) {
        for (int j = 0; j < K.cols; ++j) {
            S.at(i, j) = 0.5 * (K.at(i, j) + K.at(j, i));
        }
    }
    return S;
}

/// Dual soft-margin objective: sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
inline double dual_objective(const GramMatrix& K, const std::vector<int>& y_pm,
                             const std::vector<double>& alphas) {
    if (K.rows != K.cols) throw NotSquare("dual objective needs a square matrix");
    if (y_pm.size() != alphas.size() || static_cast<int>(alphas.size()) != K.rows) {
        throw LengthMismatch("alpha/label sizes must match the matrix");
    }
    double obj = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) obj += alphas[i];
    double quad = 0.0;
    for (int i = 0; i < K.rows; ++i) {
        if (alphas[i] == 0.0) continue;
        for (int j = 0; j < K.cols; ++j) {
            quad += alphas[i] * alphas[j] * y_pm[i] * y_pm[j] * K.at(i, j);
        }
    }
    return obj - 0.5 * quad;
}

namespace detail {

/// Accepts labels written either as {0,1} or as {-1,+1}; returns {-1,+1}.
inline std::vector<int> to_pm_labels(const std::vector<int>& y) {
    bool zero_one = true;
    bool pm_one = true;
    for (int v : y) {
        if (v != 0 && v != 1) zero_one = false;
        if (v != -1 && v != 1) pm_one = false;
    }
    if (!zero_one && !pm_one) throw ConfigError("labels must be in {0,1} or {-1,+1}");
    std::vector<int> out;
    out.reserve(y.size());
    for (int v : y) out.push_back(zero_one ? (v == 0 ? -1 : 1) : v);
    bool has_pos = false;
    bool has_neg = false;
    for (int v : out) (v > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw DegenerateLabels("training labels contain a single class");
    return out;
}

inline double decision_without_bias(const GramMatrix& K, const std::vector<int>& y,
                                    const std::vector<double>& a, int i) {
    double g = 0.0;
    for (int k = 0; k < K.rows; ++k) {
        if (a[k] != 0.0) g += a[k] * y[k] * K.at(k, i);
    }
    return g;
}

/// Final bias per the fitting rule: mean of y_i - g_i over unbounded support
/// vectors; otherwise the midpoint of the KKT-feasible bias interval from the
/// bound points (one-sided if only one side constrains it).
inline double final_bias(const GramMatrix& K, const std::vector<int>& y,
                         const std::vector<double>& a, double C, double fallback) {
    constexpr double kBoundEps = 1e-8;
    double sum = 0.0;
    int unbounded = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > kBoundEps && a[i] < C - kBoundEps) {
            sum += y[i] - decision_without_bias(K, y, a, static_cast<int>(i));
            ++unbounded;
        }
    }
    if (unbounded > 0) return sum / unbounded;

    bool has_lo = false;
    bool has_hi = false;
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double u = y[i] - decision_without_bias(K, y, a, static_cast<int>(i));
        const bool at_zero = a[i] <= kBoundEps;
        const bool lower = (at_zero && y[i] > 0) || (!at_zero && y[i] < 0);
        if (lower) {
            lo = has_lo ? std::max(lo, u) : u;
            has_lo = true;
        } else {
            hi = has_hi ? std::min(hi, u) : u;
            has_hi = true;
        }
    }
    if (has_lo && has_hi) return 0.5 * (lo + hi);
    if (has_lo) return lo;
    if (has_hi) return hi;
    return fallback;
}

inline SvmModel finalize_model(const GramMatrix& K, const std::vector<int>& y_pm,
                               std::vector<double> alphas, double C, double tol,
                               double bias_fallback, std::vector<double> trace) {
    SvmModel m;
    m.C = C;
    m.tol = tol;
    m.labels = y_pm;
    m.bias = final_bias(K, y_pm, alphas, C, bias_fallback);
    m.alphas = std::move(alphas);
    m.objective_trace = std::move(trace);
    for (std::size_t i = 0; i < m.alphas.size(); ++i) {
        if (m.alphas[i] > tol) m.support_indices.push_back(static_cast<int>(i));
    }
    double eq = 0.0;
    for (std::size_t i = 0; i < m.alphas.size(); ++i) {
        eq += m.alphas[i] * m.labels[i];
        if (m.alphas[i] < -1e-12 || m.alphas[i] > C + 1e-12) {
            throw Error("dual variable escaped the box constraint");
        }
    }
    if (std::abs(eq) > 1e-8) throw Error("dual equality constraint violated after fit");
    return m;
}

}  // namespace detail

/// Sequential minimal optimization over a precomputed kernel matrix.
/// Asymmetric inputs are symmetrized as (K + K^T)/2 before fitting. The scan
/// is deterministic: the first KKT violator by index picks its partner by
/// maximal |E_i - E_j| (lowest index on ties). Terminates after max_passes
/// consecutive sweeps without an accepted step.
inline SvmModel fit_precomputed(const GramMatrix& K_raw, const std::vector<int>& y,
                                double C = 1.0, double tol = 1e-3, int max_passes = 200) {
    if (K_raw.rows != K_raw.cols) throw NotSquare("training kernel matrix must be square");
    if (static_cast<int>(y.size()) != K_raw.rows) {
        throw LengthMismatch("label count must match the kernel matrix");
    }
    if (C <= 0.0) throw ConfigError("C must be positive");
    const GramMatrix K = symmetrized(K_raw);
    const std::vector<int> yp = detail::to_pm_labels(y);
    const int n = K.rows;

    std::vector<double> a(static_cast<std::size_t>(n), 0.0);
    double b = 0.0;
    std::vector<double> trace;
    double obj = dual_objective(K, yp, a);
    trace.push_back(obj);

    auto error_of = [&](int i) { return detail::decision_without_bias(K, yp, a, i) + b - yp[i]; };

    auto try_step = [&](int i, int j) -> bool {
        if (i == j) return false;
        const double Ei = error_of(i);
        const double Ej = error_of(j);
        const double ai_old = a[i];
        const double aj_old = a[j];
        const int s = yp[i] * yp[j];
        double L = 0.0;
        double H = 0.0;
        if (s < 0) {
            L = std::max(0.0, aj_old - ai_old);
            H = std::min(C, C + aj_old - ai_old);
        } else {
            L = std::max(0.0, ai_old + aj_old - C);
            H = std::min(C, ai_old + aj_old);
        }
        if (H - L < 1e-12) return false;

        const double eta = 2.0 * K.at(i, j) - K.at(i, i) - K.at(j, j);
        double aj_new = 0.0;
        if (eta < -1e-12) {
            aj_new = std::clamp(aj_old - yp[j] * (Ei - Ej) / eta, L, H);
        } else {
            // Flat or indefinite direction: compare the two endpoints directly.
            double best_obj = obj;
            double best_aj = aj_old;
            for (double t : {L, H}) {
                std::vector<double> cand = a;
                cand[j] = t;
                cand[i] = ai_old + s * (aj_old - t);
                const double cobj = dual_objective(K, yp, cand);
                if (cobj > best_obj + 1e-12) {
                    best_obj = cobj;
                    best_aj = t;
                }
            }
            if (best_aj == aj_old) return false;
            aj_new = best_aj;
        }
        if (std::abs(aj_new - aj_old) < 1e-5 * (aj_new + aj_old + 1e-5)) return false;
        double ai_new = ai_old + s * (aj_old - aj_new);
        if (ai_new < 1e-12) ai_new = 0.0;
        if (ai_new > C - 1e-12) ai_new = C;
        a[i] = ai_new;
        a[j] = aj_new;

        const double di = ai_new - ai_old;
        const double dj = aj_new - aj_old;
        const double b1 = b - Ei - yp[i] * di * K.at(i, i) - yp[j] * dj * K.at(i, j);
        const double b2 = b - Ej - yp[i] * di * K.at(i, j) - yp[j] * dj * K.at(j, j);
        if (ai_new > 0.0 && ai_new < C) {
            b = b1;
        } else if (aj_new > 0.0 && aj_new < C) {
            b = b2;
        } else {
            b = 0.5 * (b1 + b2);
        }

        const double new_obj = dual_objective(K, yp, a);
        if (new_obj < obj - 1e-7) throw Error("SMO dual objective decreased");
        obj = new_obj;
        trace.push_back(obj);
        return true;
    };

    int passes = 0;
    int sweeps = 0;
    const int sweep_cap = std::max(1000, 50 * max_passes);
    while (passes < max_passes && sweeps < sweep_cap) {
        ++sweeps;
        int changed = 0;
        for (int i = 0; i < n; ++i) {
            const double Ei = error_of(i);
            const double r = Ei * yp[i];
            const bool violates = (r < -tol && a[i] < C) || (r > tol && a[i] > 0.0);
            if (!violates) continue;
            // Partners ordered by |E_i - E_j| descending, index ascending on
            // ties. The best partner's step can be rejected (degenerate box
            // interval, vanishing step), so fall through to the rest rather
            // than stalling on a violator that another pair could fix.
            std::vector<int> order;
            order.reserve(static_cast<std::size_t>(n) - 1);
            for (int j = 0; j < n; ++j) {
                if (j != i) order.push_back(j);
            }
            std::vector<double> gaps(static_cast<std::size_t>(n), 0.0);
            for (const int j : order) gaps[j] = std::abs(Ei - error_of(j));
            std::stable_sort(order.begin(), order.end(),
                             [&gaps](int l, int r2) { return gaps[l] > gaps[r2] + 1e-15; });
            for (const int j : order) {
                if (try_step(i, j)) {
                    ++changed;
                    break;
                }
            }
        }
        if (changed == 0) {
            ++passes;
        } else {
            passes = 0;
        }
    }
    return detail::finalize_model(K, yp, std::move(a), C, tol, b, std::move(trace));
}

inline double decision_value(const SvmModel& m, const std::vector<double>& k_row) {
    if (k_row.size() != m.alphas.size()) {
        throw LengthMismatch("kernel row length must equal training size");
    }
    double score = m.bias;
    for (std::size_t i = 0; i < m.alphas.size(); ++i) {
        if (m.alphas[i] != 0.0) score += m.alphas[i] * m.labels[i] * k_row[i];
    }
    return score;
}

/// Label 1 when the score is positive; an exact zero score also maps to 1.
inline Prediction predict(const SvmModel& m, const std::vector<double>& k_row) {
    const double score = decision_value(m, k_row);
    return {score >= 0.0 ? 1 : 0, score};
}

/// Fraction of rows of K (kernel values against the training set) whose
/// predicted label matches y; labels in {0,1}.
inline double svm_accuracy(const SvmModel& m, const GramMatrix& K, const std::vector<int>& y) {
    if (static_cast<int>(y.size()) != K.rows) {
        throw LengthMismatch("label count must match the row count");
    }
    if (K.rows == 0) throw EmptyDataset("no rows to score");
    int hits = 0;
    for (int i = 0; i < K.rows; ++i) {
        std::vector<double> row(static_cast<std::size_t>(K.cols));
        for (int j = 0; j < K.cols; ++j) row[static_cast<std::size_t>(j)] = K.at(i, j);
        if (predict(m, row).label == y[i]) ++hits;
    }
    return static_cast<double>(hits) / K.rows;
}

/// Brute-force dual solver for validation: eliminates the equality constraint
/// through the last coordinate and runs a shrinking grid search over the free
/// coordinates down to 1e-3 resolution. Training size capped at 8.
inline SvmModel fit_qp_oracle(const GramMatrix& K_raw, const std::vector<int>& y, double C = 1.0,
                              double tol = 1e-3) {
    if (K_raw.rows != K_raw.cols) throw NotSquare("training kernel matrix must be square");
    if (static_cast<int>(y.size()) != K_raw.rows) {
        throw LengthMismatch("label count must match the kernel matrix");
    }
    if (K_raw.rows > 8) throw TooLarge("qp oracle supports at most 8 training points");
    if (C <= 0.0) throw ConfigError("C must be positive");
    const GramMatrix K = symmetrized(K_raw);
    const std::vector<int> yp = detail::to_pm_labels(y);
    const int n = K.rows;
    const int free_dims = n - 1;

    std::vector<double> best(static_cast<std::size_t>(n), 0.0);
    double best_obj = dual_objective(K, yp, best);

    // Points per axis chosen so a full level stays small even at 7 free dims.
    const int pts = free_dims <= 3 ? 21 : 7;
    std::vector<double> center(static_cast<std::size_t>(free_dims), 0.5 * C);
    double halfwidth = 0.5 * C;

    std::vector<double> cand(static_cast<std::size_t>(n), 0.0);
    while (true) {
        const double step = 2.0 * halfwidth / (pts - 1);
        std::vector<int> idx(static_cast<std::size_t>(free_dims), 0);
        while (true) {
            bool feasible = true;
            double eq = 0.0;
            for (int d = 0; d < free_dims; ++d) {
                double v = center[d] - halfwidth + step * idx[d];
                v = std::clamp(v, 0.0, C);
                cand[d] = v;
                eq += v * yp[d];
            }
            double last = -eq * yp[n - 1];
            if (last < -1e-9 || last > C + 1e-9) {
                feasible = false;
            } else {
                cand[n - 1] = std::clamp(last, 0.0, C);
            }
            if (feasible) {
                const double obj = dual_objective(K, yp, cand);
                if (obj > best_obj + 1e-15) {
                    best_obj = obj;
                    best.assign(cand.begin(), cand.end());
                }
            }
            int d = 0;
            for (; d < free_dims; ++d) {
                if (++idx[d] < pts) break;
                idx[d] = 0;
            }
            if (d == free_dims) break;
        }
        if (step <= 1e-3) break;
        for (int d = 0; d < free_dims; ++d) center[d] = best[d];
        // Shrink around the incumbent; never below the level whose step is 1e-3.
        halfwidth = std::clamp(1.5 * step, 0.5e-3 * (pts - 1), 0.5 * C);
    }
    return detail::finalize_model(K, yp, std::move(best), C, tol, 0.0, {best_obj});
}

/// Model persisted as text: a header line with C, tol, n, bias, then one
/// `index<TAB>alpha<TAB>label` line per training point (labels in {-1,+1}).
inline void save_model(std::ostream& out, const SvmModel& m) {
    out << "# discoq-svm C=" << format_double(m.C) << " tol=" << format_double(m.tol)
        << " n=" << m.alphas.size() << " bias=" << format_double(m.bias) << '\n';
    for (std::size_t i = 0; i < m.alphas.size(); ++i) {
        out << i << '\t' << format_double(m.alphas[i]) << '\t' << m.labels[i] << '\n';
    }
}

inline void save_model_file(const std::string& path, const SvmModel& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write model file: " + path);
    save_model(out, m);
}

inline SvmModel load_model(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw IoError("empty model file");
    const std::string prefix = "# discoq-svm ";
    if (header.rfind(prefix, 0) != 0) throw IoError("missing model header");
    SvmModel m;
    std::size_t n = 0;
    for (const auto& tok : split(header.substr(prefix.size()), ' ')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "C") {
            m.C = parse_double(val, "model C");
        } else if (key == "tol") {
            m.tol = parse_double(val, "model tol");
        } else if (key == "n") {
            n = static_cast<std::size_t>(parse_int(val, "model n"));
        } else if (key == "bias") {
            m.bias = parse_double(val, "model bias");
        }
    }
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cols = split(line, '\t');
        if (cols.size() != 3) {
            throw IoError("model line " + std::to_string(lineno) + ": expected 3 columns");
        }
        const auto idx = parse_int(cols[0], "model index at line " + std::to_string(lineno));
        if (idx != static_cast<long long>(m.alphas.size())) {
            throw IoError("model line " + std::to_string(lineno) + ": indices must be sequential");
        }
        const double alpha = parse_double(cols[1], "model alpha at line " + std::to_string(lineno));
        const auto label = parse_int(cols[2], "model label at line " + std::to_string(lineno));
        if (label != 1 && label != -1) {
            throw IoError("model line " + std::to_string(lineno) + ": label must be -1 or 1");
        }
        if (alpha < -1e-12 || alpha > m.C + 1e-12) {
            throw IoError("model line " + std::to_string(lineno) + ": alpha outside [0, C]");
        }
        m.alphas.push_back(alpha);
        m.labels.push_back(static_cast<int>(label));
    }
    if (m.alphas.size() != n) {
        throw IoError("model row count " + std::to_string(m.alphas.size()) +
                      " does not match header n=" + std::to_string(n));
    }
    for (std::size_t i = 0; i < m.alphas.size(); ++i) {
        if (m.alphas[i] > m.tol) m.support_indices.push_back(static_cast<int>(i));
    }
    return m;
}

inline SvmModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file: " + path);
    try {
        return load_model(in);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

}  // namespace discoq
