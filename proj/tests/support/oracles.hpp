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

// Brute-force references used by the test suites. Nothing here calls into the
// library beyond reading model tables.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "bellab/hvmodel.hpp"

namespace bellab::ref {

/// Correlations (AB, AB', A'B, A'B') in the order the library uses.
using Corr = std::array<double, 4>;

/// The four CHSH combinations written out one by one, absolute values.
inline std::array<double, 4> chsh_by_hand(const Corr& e) {
    const double ab = e[0], abp = e[1], apb = e[2], apbp = e[3];
    return {std::fabs(-ab + abp + apb + apbp), std::fabs(ab - abp + apb + apbp), std::fabs(ab + abp - apb + apbp),
            std::fabs(ab + abp + apb - apbp)};
}

/// The eight inequalities +-S_i <= 2 hold within `tol`.
inline bool eight_inequalities_hold(const Corr& e, double tol) {
    const double ab = e[0], abp = e[1], apb = e[2], apbp = e[3];
    const double s[4] = {-ab + abp + apb + apbp, ab - abp + apb + apbp, ab + abp - apb + apbp, ab + abp + apb - apbp};
    for (double v : s) {
        if (v > 2.0 + tol || -v > 2.0 + tol) return false;
    }
    return true;
}

/// Distance of the worst inequality from its bound.
inline double eight_inequality_margin(const Corr& e) {
    const auto s = chsh_by_hand(e);
    return *std::max_element(s.begin(), s.end()) - 2.0;
}

/// Correlations of a 16-cell binary table by summing products cell by cell.
/// Cell bits are (a, a', b, b') from high to low, bit 0 meaning +1.
inline Corr binary_table_correlations(const std::vector<double>& cells) {
    Corr e{};
    for (int c = 0; c < 16; ++c) {
        const double a = (c & 8) ? -1 : 1, ap = (c & 4) ? -1 : 1, b = (c & 2) ? -1 : 1, bp = (c & 1) ? -1 : 1;
        e[0] += cells[c] * a * b;
        e[1] += cells[c] * a * bp;
        e[2] += cells[c] * ap * b;
        e[3] += cells[c] * ap * bp;
    }
    return e;
}

/// Sum over cells of p |a(b'-b) + a'(b'+b)|.
inline double binary_table_lemma_bound(const std::vector<double>& cells) {
    double s = 0.0;
    for (int c = 0; c < 16; ++c) {
        const double a = (c & 8) ? -1 : 1, ap = (c & 4) ? -1 : 1, b = (c & 2) ? -1 : 1, bp = (c & 1) ? -1 : 1;
        s += cells[c] * std::fabs(a * (bp - b) + ap * (bp + b));
    }
    return s;
}

inline bool a_setting_primed(std::size_t pair) { return pair >= 2; }
inline bool b_setting_primed(std::size_t pair) { return pair % 2 == 1; }

/// Pair index for (x primed, y primed).
inline std::size_t pair_of(bool xp, bool yp) { return (xp ? 2 : 0) + (yp ? 1 : 0); }

struct TableView {
    std::vector<double> p;
    std::size_t rows, cols;
    double at(std::size_t a, std::size_t b) const { return p[a * cols + b]; }
    double row(std::size_t a) const {
        double s = 0;
        for (std::size_t b = 0; b < cols; ++b) s += at(a, b);
        return s;
    }
    double col(std::size_t b) const {
        double s = 0;
        for (std::size_t a = 0; a < rows; ++a) s += at(a, b);
        return s;
    }
};

inline TableView view(const ConditionalBehaviour& beh, std::size_t pair) {
    const auto p = static_cast<SettingPair>(pair);
    const auto t = beh.table(p);
    return {std::vector<double>(t.begin(), t.end()), beh.rows(p), beh.cols(p)};
}

/// Every pair table of every microstate equals the product of its own row and
/// column sums.
inline bool outcome_independent(const FiniteMicrostateModel& m, double tol) {
    for (const auto& ms : m.microstates()) {
        for (std::size_t p = 0; p < 4; ++p) {
            const TableView t = view(ms.behaviour, p);
            for (std::size_t a = 0; a < t.rows; ++a) {
                for (std::size_t b = 0; b < t.cols; ++b) {
                    if (std::fabs(t.at(a, b) - t.row(a) * t.col(b)) > tol) return false;
                }
            }
        }
    }
    return true;
}

/// Each side's marginal, per microstate, ignores the remote setting.
inline bool parameter_independent(const FiniteMicrostateModel& m, double tol) {
    for (const auto& ms : m.microstates()) {
        for (bool own : {false, true}) {
            const TableView a0 = view(ms.behaviour, pair_of(own, false));
            const TableView a1 = view(ms.behaviour, pair_of(own, true));
            for (std::size_t a = 0; a < a0.rows; ++a) {
                if (std::fabs(a0.row(a) - a1.row(a)) > tol) return false;
            }
            const TableView b0 = view(ms.behaviour, pair_of(false, own));
            const TableView b1 = view(ms.behaviour, pair_of(true, own));
            for (std::size_t b = 0; b < b0.cols; ++b) {
                if (std::fabs(b0.col(b) - b1.col(b)) > tol) return false;
            }
        }
    }
    return true;
}

/// Parameter independence of the rho-weighted mixture.
inline bool no_signalling(const FiniteMicrostateModel& m, double tol) {
    const auto& ms = m.microstates();
    auto mixed_row = [&](std::size_t pair, std::size_t a) {
        double s = 0;
        for (const auto& x : ms) s += x.weight * view(x.behaviour, pair).row(a);
        return s;
    };
    auto mixed_col = [&](std::size_t pair, std::size_t b) {
        double s = 0;
        for (const auto& x : ms) s += x.weight * view(x.behaviour, pair).col(b);
        return s;
    };
    for (bool own : {false, true}) {
        const TableView t0 = view(ms[0].behaviour, pair_of(own, false));
        for (std::size_t a = 0; a < t0.rows; ++a) {
            if (std::fabs(mixed_row(pair_of(own, false), a) - mixed_row(pair_of(own, true), a)) > tol) return false;
        }
        const TableView u0 = view(ms[0].behaviour, pair_of(false, own));
        for (std::size_t b = 0; b < u0.cols; ++b) {
            if (std::fabs(mixed_col(pair_of(false, own), b) - mixed_col(pair_of(true, own), b)) > tol) return false;
        }
    }
    return true;
}

/// Bell-local microstates: product tables with setting-independent marginals.
inline bool factorable(const FiniteMicrostateModel& m, double tol) {
    return outcome_independent(m, tol) && parameter_independent(m, tol);
}

}  // namespace bellab::ref
