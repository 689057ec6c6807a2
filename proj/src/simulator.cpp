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

#include "bellab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "bellab/errors.hpp"
#include "bellab/simd/kernels.hpp"

namespace bellab {

std::string_view to_string(Estimator e) {
    return e == Estimator::coincidence_only ? "coincidence" : "zero";
}

ExperimentConfig ExperimentConfig::defaults_for(const FiniteMicrostateModel& m, std::uint64_t rounds,
                                                std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.rounds = rounds;
    cfg.seed = seed;
    cfg.setting_policy = SettingPolicy::uniform(m.size());
    cfg.detection = DetectionPolicy::perfect(m.size());
    return cfg;
}

std::uint64_t PairTally::rounds() const {
    std::uint64_t n = 0;
    for (auto c : counts_) n += c;
    return n;
}

std::uint64_t PairTally::coincidences() const {
    std::uint64_t n = 0;
    for (std::size_t a = 0; a < rows_; ++a) {
        for (std::size_t b = 0; b < cols_; ++b) n += count(a, b, true, true);
    }
    return n;
}

PairTally& PairTally::operator+=(const PairTally& other) {
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    return *this;
}

Tallies::Tallies(const ObservableQuartet& q) {
    for (SettingPair p : kSettingPairs) pairs[index(p)] = PairTally(q.rows(p), q.cols(p));
}

Tallies& Tallies::operator+=(const Tallies& other) {
    for (std::size_t p = 0; p < 4; ++p) pairs[p] += other.pairs[p];
    return *this;
}

std::uint64_t Tallies::rounds() const {
    std::uint64_t n = 0;
    for (const auto& p : pairs) n += p.rounds();
    return n;
}

CorrelationEstimate estimate_correlations(const Tallies& tallies, const ObservableQuartet& q, Estimator estimator) {
    CorrelationEstimate out;
    std::array<double, 4> values{};
    for (SettingPair p : kSettingPairs) {
        const PairTally& t = tallies.pairs[index(p)];
        const auto& xs = q.outcomes(Side::A, a_variant(p));
        const auto& ys = q.outcomes(Side::B, b_variant(p));
        double sum = 0.0;
        double sum_sq = 0.0;
        std::uint64_t n = 0;
        for (std::size_t a = 0; a < t.rows(); ++a) {
            for (std::size_t b = 0; b < t.cols(); ++b) {
                const double prod = xs[a] * ys[b];
                const std::uint64_t both = t.count(a, b, true, true);
                sum += prod * static_cast<double>(both);
                sum_sq += prod * prod * static_cast<double>(both);
                n += both;
                if (estimator == Estimator::undetected_as_zero) {
                    n += t.count(a, b, true, false) + t.count(a, b, false, true) + t.count(a, b, false, false);
                }
            }
        }
        if (n == 0) {
            throw NoCoincidences("no usable events for setting pair " + std::string(to_string(p)) +
                                 " with the " + std::string(to_string(estimator)) + " estimator");
        }
        const double count = static_cast<double>(n);
        const double mean = sum / count;
        const double dispersion = std::sqrt(std::max(0.0, sum_sq / count - mean * mean));
        values[index(p)] = std::clamp(mean, -1.0, 1.0);
        out.se[index(p)] = dispersion / std::sqrt(count);
        out.counts[index(p)] = n;
    }
    out.values = CorrelationSet(values);
    return out;
}

ChshEstimate chsh_estimate(const CorrelationEstimate& c) {
    ChshEstimate out;
    out.values = chsh_list_values(c.values);
    double var = 0.0;
    for (double s : c.se) var += s * s;
    // Every list has unit coefficients, so all four share one error.
    out.se.fill(std::sqrt(var));
    out.argmax = static_cast<std::size_t>(std::max_element(out.values.begin(), out.values.end()) -
                                          out.values.begin());
    out.max = out.values[out.argmax];
    out.max_se = out.se[out.argmax];
    return out;
}

namespace {

// Inverse-CDF draw. Zero-probability entries can never be returned because
// their cumulative value equals the previous one.
std::size_t draw(std::span<const double> cumulative, double u) {
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        if (u < cumulative[i]) return i;
    }
    // u above a total that rounded below 1: take the last entry with mass.
    for (std::size_t i = cumulative.size(); i-- > 0;) {
        const double prev = i == 0 ? 0.0 : cumulative[i - 1];
        if (cumulative[i] > prev) return i;
    }
    return 0;
}

std::vector<double> cumulate(std::span<const double> p) {
    std::vector<double> c(p.size());
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += p[i];
        c[i] = s;
    }
    return c;
}

// Everything a round needs, flattened once per run.
class Sampler {
  public:
    Sampler(const FiniteMicrostateModel& m, const ExperimentConfig& cfg)
        : model_(m), rho_cdf_(cumulate(m.weights())) {
        if (cfg.setting_policy.microstate_count() != m.size()) {
            throw DomainError("setting policy covers " + std::to_string(cfg.setting_policy.microstate_count()) +
                              " microstates, model has " + std::to_string(m.size()));
        }
        if (cfg.detection.microstate_count() != m.size()) {
            throw DomainError("detection policy covers " + std::to_string(cfg.detection.microstate_count()) +
                              " microstates, model has " + std::to_string(m.size()));
        }
        for (std::size_t l = 0; l < m.size(); ++l) {
            const auto& prob = cfg.setting_policy.probabilities(l);
            settings_cdf_.push_back(cumulate(prob));
            std::array<std::vector<double>, 4> outcome;
            for (SettingPair p : kSettingPairs) outcome[index(p)] = cumulate(m.microstates()[l].behaviour.table(p));
            outcome_cdf_.push_back(std::move(outcome));
            std::array<double, 4> eta{};
            for (std::size_t o = 0; o < 4; ++o) eta[o] = cfg.detection.eta(static_cast<Observable>(o), l);
            eta_.push_back(eta);
        }
    }

    std::span<const double> rho_cdf() const { return rho_cdf_; }

    RoundRecord round(std::uint64_t r, const std::uint32_t* words, std::span<const double> microstate_cdf) const {
        RoundRecord rec;
        rec.round = r;
        rec.microstate = static_cast<std::uint32_t>(draw(microstate_cdf, simd::to_unit(words[0])));
        const std::size_t l = rec.microstate;
        rec.pair = kSettingPairs[draw(settings_cdf_[l], simd::to_unit(words[1]))];
        const std::size_t cols = model_.microstates()[l].behaviour.cols(rec.pair);
        const std::size_t cell = draw(outcome_cdf_[l][index(rec.pair)], simd::to_unit(words[2]));
        rec.a_outcome = static_cast<std::uint16_t>(cell / cols);
        rec.b_outcome = static_cast<std::uint16_t>(cell % cols);
        const Observable ao = observable(Side::A, a_variant(rec.pair));
        const Observable bo = observable(Side::B, b_variant(rec.pair));
        rec.detected_a = simd::to_unit(words[3]) < eta_[l][index(ao)];
        rec.detected_b = simd::to_unit(words[4]) < eta_[l][index(bo)];
        return rec;
    }

  private:
    const FiniteMicrostateModel& model_;
    std::vector<double> rho_cdf_;
    std::vector<std::vector<double>> settings_cdf_;
    std::vector<std::array<std::vector<double>, 4>> outcome_cdf_;
    std::vector<std::array<double, 4>> eta_;
};

constexpr std::uint64_t kBatchRounds = 4096;

template <class Visit>
void for_each_round(const Sampler& sampler, simd::PhiloxKey key, std::uint64_t first, std::uint64_t count,
                    Visit&& visit) {
    std::vector<std::uint32_t> words(kBatchRounds * simd::kWordsPerRound);
    for (std::uint64_t done = 0; done < count;) {
        const std::uint64_t n = std::min(kBatchRounds, count - done);
        std::span<std::uint32_t> batch(words.data(), n * simd::kWordsPerRound);
        simd::round_words(key, first + done, batch);
        for (std::uint64_t i = 0; i < n; ++i) {
            visit(sampler.round(first + done + i, batch.data() + i * simd::kWordsPerRound, sampler.rho_cdf()));
        }
        done += n;
    }
}

unsigned worker_count(unsigned requested, std::uint64_t rounds) {
    unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    const std::uint64_t max_useful = std::max<std::uint64_t>(1, rounds / kBatchRounds);
    return static_cast<unsigned>(std::min<std::uint64_t>(n, max_useful));
}

Tallies tally_memoryless(const FiniteMicrostateModel& m, const ExperimentConfig& cfg) {
    const Sampler sampler(m, cfg);
    const auto key = simd::philox_key(cfg.seed);
    const unsigned workers = worker_count(cfg.threads, cfg.rounds);

    std::vector<Tallies> partial(workers, Tallies(m.quartet()));
    auto work = [&](unsigned w) {
        const std::uint64_t begin = cfg.rounds * w / workers;
        const std::uint64_t end = cfg.rounds * (w + 1) / workers;
        Tallies& t = partial[w];
        for_each_round(sampler, key, begin, end - begin, [&](const RoundRecord& r) {
            t.pairs[index(r.pair)].add(r.a_outcome, r.b_outcome, r.detected_a, r.detected_b);
        });
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    Tallies total(m.quartet());
    for (const auto& t : partial) total += t;
    return total;
}

RunResult finish(const FiniteMicrostateModel& m, const ExperimentConfig& cfg, Tallies tallies, bool sequential) {
    auto corr = estimate_correlations(tallies, m.quartet(), cfg.estimator);
    auto chsh = chsh_estimate(corr);
    return RunResult{cfg.rounds, cfg.seed, cfg.estimator, sequential, std::move(tallies), corr, chsh};
}

}  // namespace

std::vector<RoundRecord> simulate_rounds(const FiniteMicrostateModel& m, const ExperimentConfig& cfg,
                                         std::uint64_t first, std::uint64_t count) {
    if (!cfg.memory.is_memoryless()) throw DomainError("simulate_rounds needs a memoryless rule");
    const Sampler sampler(m, cfg);
    std::vector<RoundRecord> out;
    out.reserve(count);
    for_each_round(sampler, simd::philox_key(cfg.seed), first, count,
                   [&](const RoundRecord& r) { out.push_back(r); });
    return out;
}

MemoryRunResult run_memory_model(const MemoryRule& rule, const FiniteMicrostateModel& m, ExperimentConfig cfg,
                                 std::uint64_t block_size) {
    if (cfg.rounds == 0) throw DomainError("a run needs at least one round");
    if (block_size == 0 || cfg.rounds % block_size != 0) {
        throw DomainError("block size " + std::to_string(block_size) + " does not divide " +
                          std::to_string(cfg.rounds) + " rounds");
    }
    cfg.memory = rule;
    const Sampler sampler(m, cfg);
    const auto key = simd::philox_key(cfg.seed);
    const auto& q = m.quartet();

    std::vector<RoundRecord> records;
    records.reserve(cfg.rounds);
    History history;
    Tallies cumulative(q);
    Tallies block(q);
    MemoryRunResult result{{}, RunResult{cfg.rounds, cfg.seed, cfg.estimator, true, Tallies(q), {}, {}}};

    std::array<std::uint32_t, simd::kWordsPerRound> words{};
    for (std::uint64_t r = 0; r < cfg.rounds; ++r) {
        history.records = records;
        const std::vector<double> dist = rule.next_distribution(history, m, cfg.setting_policy);
        const std::vector<double> cdf = cumulate(dist);
        simd::round_words(key, r, words);
        const RoundRecord rec = sampler.round(r, words.data(), cdf);
        records.push_back(rec);

        auto& h = history.pairs[index(rec.pair)];
        ++h.rounds;
        if (rec.detected_a && rec.detected_b) {
            ++h.coincidences;
            h.product_sum += q.outcomes(Side::A, a_variant(rec.pair))[rec.a_outcome] *
                             q.outcomes(Side::B, b_variant(rec.pair))[rec.b_outcome];
        }
        block.pairs[index(rec.pair)].add(rec.a_outcome, rec.b_outcome, rec.detected_a, rec.detected_b);

        if ((r + 1) % block_size == 0) {
            cumulative += block;
            const auto block_chsh = chsh_estimate(estimate_correlations(block, q, cfg.estimator));
            const auto cum_chsh = chsh_estimate(estimate_correlations(cumulative, q, cfg.estimator));
            result.blocks.push_back({r + 1, block_chsh.max, block_chsh.max_se, cum_chsh.max, cum_chsh.max_se});
            block = Tallies(q);
        }
    }
    result.cumulative = finish(m, cfg, std::move(cumulative), true);
    return result;
}

RunResult run_experiment(const FiniteMicrostateModel& m, const ExperimentConfig& cfg) {
    if (cfg.rounds == 0) throw DomainError("a run needs at least one round");
    if (!cfg.memory.is_memoryless()) return run_memory_model(cfg.memory, m, cfg, cfg.rounds).cumulative;
    return finish(m, cfg, tally_memoryless(m, cfg), false);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    // splitmix64 finalizer over a Weyl step.
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<SweepRow> sweep_efficiency(const FiniteMicrostateModel& m, const ExperimentConfig& cfg,
                                       std::span<const double> eta_grid) {
    std::vector<SweepRow> rows;
    rows.reserve(eta_grid.size());
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        ExperimentConfig point = cfg;
        point.detection = cfg.detection.scaled(eta_grid[i]);
        point.seed = derive_seed(cfg.seed, i);
        const RunResult r = run_experiment(m, point);
        rows.push_back({eta_grid[i], r.chsh.max, r.chsh.max_se});
    }
    return rows;
}

}  // namespace bellab
