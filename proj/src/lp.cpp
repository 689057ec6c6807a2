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

// JPD existence as a linear feasibility problem over the joint table cells.

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "bellab/errors.hpp"
#include "bellab/jpd.hpp"
#include "lp_simplex.hpp"

namespace bellab {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr std::size_t kMaxIterations = 10000;
constexpr double kPivotEps = 1e-12;
// Double results with a residual inside this band are re-solved exactly.
constexpr double kAmbiguousLow = 1e-11;
constexpr double kAmbiguousHigh = 1e-7;
// The normalization row is weighted so that a CHSH excess of d forces a
// residual of at least d even when the total mass drifts.
constexpr double kSumRowWeight = 2.0;

struct System {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<double> weight;
};

System build_system(const ObservableQuartet& q, const CorrelationSet& c,
                    const std::optional<std::array<double, 4>>& singles) {
    const std::size_t n = q.joint_size();
    const auto& va = q.outcomes(Observable::A);
    const auto& vap = q.outcomes(Observable::Ap);
    const auto& vb = q.outcomes(Observable::B);
    const auto& vbp = q.outcomes(Observable::Bp);

    System s;
    const std::size_t rows = singles ? 9 : 5;
    s.a.assign(rows, std::vector<double>(n, 0.0));
    s.b.assign(rows, 0.0);
    s.weight.assign(rows, 1.0);
    s.weight[0] = kSumRowWeight;
    s.b[0] = 1.0;
    for (std::size_t p = 0; p < 4; ++p) s.b[1 + p] = c.values()[p];
    if (singles) {
        for (std::size_t o = 0; o < 4; ++o) s.b[5 + o] = (*singles)[o];
    }

    std::size_t cell = 0;
    for (double a : va) {
        for (double ap : vap) {
            for (double b : vb) {
                for (double bp : vbp) {
                    s.a[0][cell] = 1.0;
                    s.a[1][cell] = a * b;
                    s.a[2][cell] = a * bp;
                    s.a[3][cell] = ap * b;
                    s.a[4][cell] = ap * bp;
                    if (singles) {
                        s.a[5][cell] = a;
                        s.a[6][cell] = ap;
                        s.a[7][cell] = b;
                        s.a[8][cell] = bp;
                    }
                    ++cell;
                }
            }
        }
    }
    return s;
}

double weighted_residual(const System& s, std::span<const double> x) {
    double total = 0.0;
    for (std::size_t i = 0; i < s.b.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) row += s.a[i][j] * x[j];
        total += s.weight[i] * std::abs(row - s.b[i]);
    }
    return total;
}

Jpd make_witness(const ObservableQuartet& q, std::vector<double> x) {
    double sum = 0.0;
    for (double& v : x) {
        v = std::max(v, 0.0);
        sum += v;
    }
    for (double& v : x) v /= sum;
    return Jpd(q, std::move(x));
}

InfeasibilityCertificate make_certificate(const CorrelationSet& c, std::vector<double> farkas) {
    InfeasibilityCertificate cert;
    const ChshValues v = chsh_list_values(c);
    const auto worst = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    cert.slack = v[worst] - 2.0;
    if (cert.slack > kTolerance) {
        cert.list_index = static_cast<int>(worst);
        cert.sign = chsh_signed_sum(c, worst) < 0.0 ? -1 : 1;
    }
    cert.farkas = std::move(farkas);
    return cert;
}

}  // namespace

FeasibilityResult lp_feasible_jpd(const CorrelationSet& c, const std::optional<std::array<double, 4>>& singles,
                                  const ObservableQuartet& quartet) {
    if (singles) {
        for (double s : *singles) {
            if (!std::isfinite(s) || std::abs(s) > 1.0) {
                throw DomainError("single mean " + std::to_string(s) + " lies outside [-1, 1]");
            }
        }
    }
    const System sys = build_system(quartet, c, singles);

    FeasibilityResult result;
    std::vector<double> x;
    std::vector<double> duals;
    bool decided = false;

    const auto approx = lp::minimize_l1_residual<double>(sys.a, sys.b, sys.weight, kPivotEps, kMaxIterations);
    if (approx.converged) {
        const double residual = weighted_residual(sys, approx.x);
        if (residual < kAmbiguousLow || residual > kAmbiguousHigh) {
            result.residual = residual;
            x = approx.x;
            duals = approx.duals;
            decided = true;
        }
    }

    if (!decided) {
        // Doubles convert to rationals exactly, so this decides the query as posed.
        std::vector<std::vector<Rational>> a(sys.a.size());
        for (std::size_t i = 0; i < sys.a.size(); ++i) a[i].assign(sys.a[i].begin(), sys.a[i].end());
        const std::vector<Rational> b(sys.b.begin(), sys.b.end());
        const std::vector<Rational> w(sys.weight.begin(), sys.weight.end());
        const auto exact = lp::minimize_l1_residual<Rational>(a, b, w, Rational(0), kMaxIterations);
        if (!exact.converged) throw NumericalFailure("simplex did not converge in double or rational arithmetic");
        result.exact = true;
        result.residual = static_cast<double>(exact.objective);
        x.clear();
        for (const auto& v : exact.x) x.push_back(static_cast<double>(v));
        duals.clear();
        for (const auto& v : exact.duals) duals.push_back(static_cast<double>(v));
        // Compare in exact arithmetic so the boundary is not blurred again.
        result.status = exact.objective <= Rational(kTolerance) ? FeasibilityStatus::feasible
                                                                 : FeasibilityStatus::infeasible;
    } else {
        result.status = result.residual <= kTolerance ? FeasibilityStatus::feasible : FeasibilityStatus::infeasible;
    }

    if (result.status == FeasibilityStatus::feasible) {
        result.witness = make_witness(quartet, std::move(x));
    } else {
        result.certificate = make_certificate(c, std::move(duals));
    }
    return result;
}

}  // namespace bellab
