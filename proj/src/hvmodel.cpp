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

#include "bellab/hvmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bellab/errors.hpp"

namespace bellab {

namespace {

void check_distribution(std::span<const double> d, const std::string& what) {
    double sum = 0.0;
    for (double v : d) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidDistribution(what + " has entry " + std::to_string(v));
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kTolerance) {
        throw InvalidDistribution(what + " sums to " + std::to_string(sum));
    }
}

std::array<std::size_t, 4> sizes_of(const ObservableQuartet& q) {
    return {q.size(Observable::A), q.size(Observable::Ap), q.size(Observable::B), q.size(Observable::Bp)};
}

}  // namespace

ConditionalBehaviour::ConditionalBehaviour(const ObservableQuartet& quartet, std::array<std::vector<double>, 4> tables)
    : sizes_(sizes_of(quartet)), tables_(std::move(tables)) {
    for (SettingPair p : kSettingPairs) {
        const auto& t = tables_[index(p)];
        const std::string name = "behaviour table " + std::string(to_string(p));
        if (t.size() != rows(p) * cols(p)) {
            throw InvalidDistribution(name + " has " + std::to_string(t.size()) + " entries, expected " +
                                      std::to_string(rows(p) * cols(p)));
        }
        check_distribution(t, name);
    }
}

std::vector<double> ConditionalBehaviour::a_marginal(SettingPair p) const {
    std::vector<double> out(rows(p), 0.0);
    const auto t = table(p);
    for (std::size_t a = 0; a < rows(p); ++a) {
        for (std::size_t b = 0; b < cols(p); ++b) out[a] += t[a * cols(p) + b];
    }
    return out;
}

std::vector<double> ConditionalBehaviour::b_marginal(SettingPair p) const {
    std::vector<double> out(cols(p), 0.0);
    const auto t = table(p);
    for (std::size_t a = 0; a < rows(p); ++a) {
        for (std::size_t b = 0; b < cols(p); ++b) out[b] += t[a * cols(p) + b];
    }
    return out;
}

bool ConditionalBehaviour::fits(const ObservableQuartet& q) const { return sizes_ == sizes_of(q); }

LocalResponse::LocalResponse(const ObservableQuartet& quartet, std::array<std::vector<double>, 4> distributions)
    : dists_(std::move(distributions)) {
    for (std::size_t i = 0; i < 4; ++i) {
        const auto o = static_cast<Observable>(i);
        const std::string name = "local response for " + std::string(to_string(o));
        if (dists_[i].size() != quartet.size(o)) {
            throw InvalidDistribution(name + " has " + std::to_string(dists_[i].size()) + " entries, expected " +
                                      std::to_string(quartet.size(o)));
        }
        check_distribution(dists_[i], name);
    }
}

LocalResponse LocalResponse::deterministic(const ObservableQuartet& quartet,
                                           const std::array<std::size_t, 4>& outcome) {
    std::array<std::vector<double>, 4> d;
    for (std::size_t i = 0; i < 4; ++i) {
        d[i].assign(quartet.size(static_cast<Observable>(i)), 0.0);
        if (outcome[i] >= d[i].size()) throw InvalidDistribution("deterministic outcome index out of range");
        d[i][outcome[i]] = 1.0;
    }
    return LocalResponse(quartet, std::move(d));
}

ConditionalBehaviour LocalResponse::behaviour(const ObservableQuartet& quartet) const {
    std::array<std::vector<double>, 4> tables;
    for (SettingPair p : kSettingPairs) {
        const auto& pa = dists_[index(observable(Side::A, a_variant(p)))];
        const auto& pb = dists_[index(observable(Side::B, b_variant(p)))];
        auto& t = tables[index(p)];
        t.reserve(pa.size() * pb.size());
        for (double x : pa) {
            for (double y : pb) t.push_back(x * y);
        }
    }
    return ConditionalBehaviour(quartet, std::move(tables));
}

FiniteMicrostateModel::FiniteMicrostateModel(ObservableQuartet quartet, std::vector<Microstate> microstates)
    : quartet_(std::move(quartet)), microstates_(std::move(microstates)) {
    if (microstates_.empty()) throw InvalidDistribution("model has no microstates");
    std::vector<double> w = weights();
    check_distribution(w, "microstate weights");
    for (std::size_t i = 0; i < microstates_.size(); ++i) {
        if (!microstates_[i].behaviour.fits(quartet_)) {
            throw InvalidDistribution("microstate " + std::to_string(i) + " behaviour does not fit the quartet");
        }
    }
}

FiniteMicrostateModel FiniteMicrostateModel::single(ObservableQuartet quartet, ConditionalBehaviour behaviour) {
    std::vector<Microstate> ms;
    ms.push_back(Microstate{1.0, std::move(behaviour), std::nullopt});
    return FiniteMicrostateModel(std::move(quartet), std::move(ms));
}

std::vector<double> FiniteMicrostateModel::weights() const {
    std::vector<double> w;
    w.reserve(microstates_.size());
    for (const auto& m : microstates_) w.push_back(m.weight);
    return w;
}

bool FiniteMicrostateModel::has_local_decomposition() const {
    return std::all_of(microstates_.begin(), microstates_.end(),
                       [](const Microstate& m) { return m.local.has_value(); });
}

FiniteMicrostateModel make_local_model(const ObservableQuartet& quartet, std::span<const LocalResponse> responses,
                                       std::span<const double> weights) {
    if (responses.size() != weights.size()) {
        throw InvalidDistribution("make_local_model: " + std::to_string(responses.size()) + " responses but " +
                                  std::to_string(weights.size()) + " weights");
    }
    std::vector<Microstate> ms;
    ms.reserve(responses.size());
    for (std::size_t i = 0; i < responses.size(); ++i) {
        // Re-validate against this quartet; a response may come from elsewhere.
        std::array<std::vector<double>, 4> d;
        for (std::size_t o = 0; o < 4; ++o) d[o] = responses[i].distribution(static_cast<Observable>(o));
        LocalResponse r(quartet, std::move(d));
        ms.push_back(Microstate{weights[i], r.behaviour(quartet), std::move(r)});
    }
    return FiniteMicrostateModel(quartet, std::move(ms));
}

ConditionalBehaviour behaviour_of_model(const FiniteMicrostateModel& m) {
    std::array<std::vector<double>, 4> tables;
    const auto& first = m.microstates().front().behaviour;
    for (SettingPair p : kSettingPairs) tables[index(p)].assign(first.table(p).size(), 0.0);
    for (const auto& ms : m.microstates()) {
        for (SettingPair p : kSettingPairs) {
            const auto src = ms.behaviour.table(p);
            auto& dst = tables[index(p)];
            for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += ms.weight * src[c];
        }
    }
    return ConditionalBehaviour(m.quartet(), std::move(tables));
}

CorrelationSet correlations_of_behaviour(const ConditionalBehaviour& b, const ObservableQuartet& q) {
    std::array<double, 4> e{};
    for (SettingPair p : kSettingPairs) {
        const auto& xs = q.outcomes(Side::A, a_variant(p));
        const auto& ys = q.outcomes(Side::B, b_variant(p));
        double sum = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            for (std::size_t k = 0; k < ys.size(); ++k) sum += xs[i] * ys[k] * b(p, i, k);
        }
        e[index(p)] = std::clamp(sum, -1.0, 1.0);
    }
    return CorrelationSet(e);
}

DetectionPolicy DetectionPolicy::perfect(std::size_t microstates) { return constant(microstates, 1.0); }

DetectionPolicy DetectionPolicy::constant(std::size_t microstates, double eta) {
    std::array<std::vector<double>, 4> t;
    for (auto& row : t) row.assign(microstates, eta);
    return DetectionPolicy(std::move(t));
}

DetectionPolicy::DetectionPolicy(std::array<std::vector<double>, 4> table) : table_(std::move(table)) {
    for (std::size_t o = 0; o < 4; ++o) {
        if (table_[o].size() != table_[0].size()) throw DomainError("detection table is ragged");
        for (double eta : table_[o]) {
            if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0) {
                throw DomainError("detection efficiency " + std::to_string(eta) + " lies outside [0, 1]");
            }
        }
    }
    if (table_[0].empty()) throw DomainError("detection table has no microstates");
}

DetectionPolicy DetectionPolicy::scaled(double factor) const {
    auto t = table_;
    for (auto& row : t) {
        for (double& eta : row) eta *= factor;
    }
    return DetectionPolicy(std::move(t));
}

bool DetectionPolicy::is_perfect() const {
    return std::all_of(table_.begin(), table_.end(), [](const std::vector<double>& row) {
        return std::all_of(row.begin(), row.end(), [](double eta) { return eta == 1.0; });
    });
}

SettingPolicy SettingPolicy::uniform(std::size_t microstates) {
    return independent(microstates, {0.25, 0.25, 0.25, 0.25});
}

SettingPolicy SettingPolicy::independent(std::size_t microstates, const std::array<double, 4>& probabilities) {
    return SettingPolicy(std::vector<std::array<double, 4>>(microstates, probabilities));
}

SettingPolicy::SettingPolicy(std::vector<std::array<double, 4>> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw InvalidDistribution("setting policy has no microstates");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        check_distribution(rows_[i], "setting policy row " + std::to_string(i));
    }
}

MemoryRule MemoryRule::adaptive(double strength) {
    if (!(strength >= 0.0 && strength <= 1.0)) {
        throw DomainError("adaptive memory strength " + std::to_string(strength) + " lies outside [0, 1]");
    }
    MemoryRule r;
    r.kind_ = MemoryKind::adaptive;
    r.strength_ = strength;
    return r;
}

std::vector<double> MemoryRule::next_distribution(const History& history, const FiniteMicrostateModel& model,
                                                  const SettingPolicy& settings) const {
    std::vector<double> rho = model.weights();
    if (kind_ == MemoryKind::memoryless || strength_ == 0.0) return rho;

    const ObservableQuartet& q = model.quartet();
    std::array<double, 4> mean{};
    for (std::size_t p = 0; p < 4; ++p) {
        const auto& h = history.pairs[p];
        mean[p] = h.coincidences > 0 ? h.product_sum / static_cast<double>(h.coincidences) : 0.0;
    }

    // Target the list that currently leads, pushing its signed sum outward.
    std::size_t target = 0;
    double best_value = -1.0;
    for (std::size_t list = 0; list < 4; ++list) {
        double s = 0.0;
        const auto c = chsh_coefficients(list);
        for (std::size_t p = 0; p < 4; ++p) s += c[p] * mean[p];
        if (std::abs(s) > best_value) {
            best_value = std::abs(s);
            target = list;
        }
    }
    const auto coef = chsh_coefficients(target);
    double direction = 0.0;
    for (std::size_t p = 0; p < 4; ++p) direction += coef[p] * mean[p];
    direction = direction < 0.0 ? -1.0 : 1.0;

    std::size_t best = 0;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < model.size(); ++l) {
        const auto& beh = model.microstates()[l].behaviour;
        const auto& prob = settings.probabilities(l);
        double gain = 0.0;
        for (SettingPair p : kSettingPairs) {
            const std::size_t pi = index(p);
            if (prob[pi] == 0.0) continue;
            const auto& xs = q.outcomes(Side::A, a_variant(p));
            const auto& ys = q.outcomes(Side::B, b_variant(p));
            double expected = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                for (std::size_t k = 0; k < ys.size(); ++k) expected += xs[i] * ys[k] * beh(p, i, k);
            }
            const auto& h = history.pairs[pi];
            const double n = static_cast<double>(h.coincidences);
            const double updated = (h.product_sum + expected) / (n + 1.0);
            gain += prob[pi] * coef[pi] * (updated - mean[pi]);
        }
        gain *= direction;
        if (gain > best_gain) {
            best_gain = gain;
            best = l;
        }
    }

    for (double& w : rho) w *= 1.0 - strength_;
    rho[best] += strength_;
    return rho;
}

std::string_view to_string(MemoryKind kind) {
    switch (kind) {
        case MemoryKind::memoryless: return "memoryless";
        case MemoryKind::adaptive: return "adaptive";
    }
    return "?";
}

}  // namespace bellab
