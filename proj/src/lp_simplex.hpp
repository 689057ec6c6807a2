// Copyright 2026 The Bellab Authors
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

// Dense tableau simplex for the minimum weighted-L1 residual of A x = b over
// x >= 0. Problems here have at most a few hundred columns and nine rows, so
// the tableau is rebuilt per call and Bland's rule guards against cycling.
// The scalar type is double or an exact rational.

#pragma once

#include <cstddef>
#include <vector>

namespace bellab::lp {

template <class T>
struct L1Outcome {
    bool converged = false;
    T objective{};
    std::vector<T> x;      // primal values of the structural columns
    std::vector<T> duals;  // one per row of the original (unflipped) system
};

/// minimize sum_i w_i |A_i x - b_i| subject to x >= 0, written as
/// A x + r+ - r- = b with r+, r- >= 0. `eps` is the pivot tolerance (zero for
/// exact arithmetic).
template <class T>
L1Outcome<T> minimize_l1_residual(const std::vector<std::vector<T>>& a, const std::vector<T>& b,
                                  const std::vector<T>& weight, const T& eps, std::size_t max_iterations) {
    const std::size_t m = b.size();
    const std::size_t n = m == 0 ? 0 : a[0].size();
    const std::size_t cols = n + 2 * m;
    const std::size_t rhs = cols;

    std::vector<T> flip(m, T(1));
    std::vector<std::vector<T>> t(m + 1, std::vector<T>(cols + 1, T(0)));
    std::vector<T> cost(cols, T(0));
    std::vector<std::size_t> basis(m);

    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < T(0)) flip[i] = T(-1);
        for (std::size_t j = 0; j < n; ++j) t[i][j] = flip[i] * a[i][j];
        t[i][n + i] = T(1);
        t[i][n + m + i] = T(-1);
        t[i][rhs] = flip[i] * b[i];
        cost[n + i] = weight[i];
        cost[n + m + i] = weight[i];
        basis[i] = n + i;
    }
    // Objective row holds reduced costs; its rhs holds minus the objective.
    for (std::size_t j = 0; j <= cols; ++j) {
        T z = j < cols ? cost[j] : T(0);
        for (std::size_t i = 0; i < m; ++i) z -= cost[basis[i]] * t[i][j];
        t[m][j] = z;
    }

    L1Outcome<T> out;
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < cols; ++j) {
            if (t[m][j] < -eps) {
                enter = j;
                break;
            }
        }
        if (enter == cols) {
            out.converged = true;
            break;
        }

        std::size_t leave = m;
        T best_ratio{};
        for (std::size_t i = 0; i < m; ++i) {
            if (!(t[i][enter] > eps)) continue;
            T ratio = t[i][rhs] / t[i][enter];
            if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        // The objective is bounded below by zero, so an unbounded ray means
        // the tolerance let a bad column in.
        if (leave == m) return out;

        const T pivot = t[leave][enter];
        for (std::size_t j = 0; j <= cols; ++j) t[leave][j] /= pivot;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const T factor = t[i][enter];
            if (factor == T(0)) continue;
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= factor * t[leave][j];
        }
        basis[leave] = enter;
    }
    if (!out.converged) return out;

    out.objective = -t[m][rhs];
    out.x.assign(n, T(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) out.x[basis[i]] = t[i][rhs];
    }
    // Reduced cost of r+_i is w_i - y_i for the flipped system.
    out.duals.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.duals[i] = flip[i] * (weight[i] - t[m][n + i]);
    return out;
}

}  // namespace bellab::lp
