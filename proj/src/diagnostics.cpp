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

#include "bellab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bellab/errors.hpp"

namespace bellab {

namespace {

constexpr double kConditioningFloor = 1e-12;

std::string outcome_text(double v) {
    std::ostringstream os;
    if (v > 0) os << '+';
    os << v;
    return os.str();
}

// Keeps the first location that attains the running maximum.
class MaxTracker {
  public:
    template <class Describe>
    void offer(double value, Describe&& describe) {
        if (value > best_.value || (best_.witness.empty() && value >= best_.value)) {
            best_.value = value;
            best_.witness = describe();
        }
    }
    Deviation result() && {
        if (best_.value <= 0.0) best_.witness.clear();
        return std::move(best_);
    }

  private:
    Deviation best_;
};

std::string where(std::size_t lambda, SettingPair p) {
    return "lambda=" + std::to_string(lambda) + " settings=(" +
           std::string(to_string(observable(Side::A, a_variant(p)))) + "," +
           std::string(to_string(observable(Side::B, b_variant(p)))) + ")";
}

// p(a|x,l) averaged over B's setting, and p(b|y,l) averaged over A's.
std::vector<double> averaged_a(const ConditionalBehaviour& b, Variant x) {
    const auto m0 = b.a_marginal(make_setting_pair(x, Variant::base));
    const auto m1 = b.a_marginal(make_setting_pair(x, Variant::primed));
    std::vector<double> out(m0.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (m0[i] + m1[i]);
    return out;
}

std::vector<double> averaged_b(const ConditionalBehaviour& b, Variant y) {
    const auto m0 = b.b_marginal(make_setting_pair(Variant::base, y));
    const auto m1 = b.b_marginal(make_setting_pair(Variant::primed, y));
    std::vector<double> out(m0.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (m0[i] + m1[i]);
    return out;
}

std::string flag_name(Side s, Variant v) { return std::string(to_string(observable(s, v))); }

}  // namespace

Deviation check_factorability(const FiniteMicrostateModel& m) {
    const auto& q = m.quartet();
    MaxTracker tracker;
    for (std::size_t l = 0; l < m.size(); ++l) {
        const auto& beh = m.microstates()[l].behaviour;
        for (SettingPair p : kSettingPairs) {
            const auto pa = averaged_a(beh, a_variant(p));
            const auto pb = averaged_b(beh, b_variant(p));
            const auto& xs = q.outcomes(Side::A, a_variant(p));
            const auto& ys = q.outcomes(Side::B, b_variant(p));
            for (std::size_t a = 0; a < pa.size(); ++a) {
                for (std::size_t b = 0; b < pb.size(); ++b) {
                    tracker.offer(std::abs(beh(p, a, b) - pa[a] * pb[b]), [&] {
                        return where(l, p) + " outcomes=(" + outcome_text(xs[a]) + "," + outcome_text(ys[b]) + ")";
                    });
                }
            }
        }
    }
    return std::move(tracker).result();
}

namespace {

// Largest change of one side's marginal under a change of the remote setting.
// Per microstate, or after averaging over rho when `averaged`.
Deviation remote_setting_sensitivity(const FiniteMicrostateModel& m, bool averaged) {
    const auto& q = m.quartet();
    MaxTracker tracker;
    const std::size_t groups = averaged ? 1 : m.size();
    for (std::size_t g = 0; g < groups; ++g) {
        for (Variant own : {Variant::base, Variant::primed}) {
            // A side: own = x, compare y = B vs y = B'.
            std::vector<double> a0(q.size(observable(Side::A, own)), 0.0);
            std::vector<double> a1 = a0;
            std::vector<double> b0(q.size(observable(Side::B, own)), 0.0);
            std::vector<double> b1 = b0;
            for (std::size_t l = 0; l < m.size(); ++l) {
                if (!averaged && l != g) continue;
                const auto& ms = m.microstates()[l];
                const double w = averaged ? ms.weight : 1.0;
                const auto ma0 = ms.behaviour.a_marginal(make_setting_pair(own, Variant::base));
                const auto ma1 = ms.behaviour.a_marginal(make_setting_pair(own, Variant::primed));
                const auto mb0 = ms.behaviour.b_marginal(make_setting_pair(Variant::base, own));
                const auto mb1 = ms.behaviour.b_marginal(make_setting_pair(Variant::primed, own));
                for (std::size_t i = 0; i < a0.size(); ++i) {
                    a0[i] += w * ma0[i];
                    a1[i] += w * ma1[i];
                }
                for (std::size_t i = 0; i < b0.size(); ++i) {
                    b0[i] += w * mb0[i];
                    b1[i] += w * mb1[i];
                }
            }
            const std::string scope = averaged ? std::string("rho-averaged") : "lambda=" + std::to_string(g);
            const auto& xa = q.outcomes(Side::A, own);
            for (std::size_t i = 0; i < a0.size(); ++i) {
                tracker.offer(std::abs(a0[i] - a1[i]), [&] {
                    return scope + " side=A setting=" + flag_name(Side::A, own) + " outcome=" + outcome_text(xa[i]) +
                           " remote=(B vs B')";
                });
            }
            const auto& xb = q.outcomes(Side::B, own);
            for (std::size_t i = 0; i < b0.size(); ++i) {
                tracker.offer(std::abs(b0[i] - b1[i]), [&] {
                    return scope + " side=B setting=" + flag_name(Side::B, own) + " outcome=" + outcome_text(xb[i]) +
                           " remote=(A vs A')";
                });
            }
        }
    }
    return std::move(tracker).result();
}

}  // namespace

Deviation check_parameter_independence(const FiniteMicrostateModel& m) { return remote_setting_sensitivity(m, false); }

Deviation check_no_signalling(const FiniteMicrostateModel& m) { return remote_setting_sensitivity(m, true); }

Deviation check_outcome_independence(const FiniteMicrostateModel& m) {
    const auto& q = m.quartet();
    MaxTracker tracker;
    for (std::size_t l = 0; l < m.size(); ++l) {
        const auto& beh = m.microstates()[l].behaviour;
        for (SettingPair p : kSettingPairs) {
            const auto pa = beh.a_marginal(p);
            const auto pb = beh.b_marginal(p);
            const auto& xs = q.outcomes(Side::A, a_variant(p));
            const auto& ys = q.outcomes(Side::B, b_variant(p));
            for (std::size_t a = 0; a < pa.size(); ++a) {
                for (std::size_t b = 0; b < pb.size(); ++b) {
                    const double joint = beh(p, a, b);
                    if (pb[b] >= kConditioningFloor) {
                        tracker.offer(std::abs(joint / pb[b] - pa[a]), [&] {
                            return where(l, p) + " p(a=" + outcome_text(xs[a]) + "|b=" + outcome_text(ys[b]) + ")";
                        });
                    }
                    if (pa[a] >= kConditioningFloor) {
                        tracker.offer(std::abs(joint / pa[a] - pb[b]), [&] {
                            return where(l, p) + " p(b=" + outcome_text(ys[b]) + "|a=" + outcome_text(xs[a]) + ")";
                        });
                    }
                }
            }
        }
    }
    return std::move(tracker).result();
}

Deviation check_fair_detection(const DetectionPolicy& d) {
    MaxTracker tracker;
    for (Side s : {Side::A, Side::B}) {
        for (Variant v : {Variant::base, Variant::primed}) {
            double lo = 1.0;
            double hi = 0.0;
            std::size_t lo_at = 0;
            std::size_t hi_at = 0;
            for (std::size_t l = 0; l < d.microstate_count(); ++l) {
                const double eta = d.eta(s, v, l);
                if (eta < lo) {
                    lo = eta;
                    lo_at = l;
                }
                if (eta > hi) {
                    hi = eta;
                    hi_at = l;
                }
            }
            tracker.offer(std::max(0.0, hi - lo), [&] {
                return "setting=" + flag_name(s, v) + " eta(lambda=" + std::to_string(hi_at) +
                       ")=" + std::to_string(hi) + " vs eta(lambda=" + std::to_string(lo_at) +
                       ")=" + std::to_string(lo);
            });
        }
    }
    return std::move(tracker).result();
}

Deviation check_no_conspiracy(const SettingPolicy& s) {
    MaxTracker tracker;
    for (SettingPair p : kSettingPairs) {
        double lo = 1.0;
        double hi = 0.0;
        std::size_t lo_at = 0;
        std::size_t hi_at = 0;
        for (std::size_t l = 0; l < s.microstate_count(); ++l) {
            const double v = s.probabilities(l)[index(p)];
            if (v < lo) {
                lo = v;
                lo_at = l;
            }
            if (v > hi) {
                hi = v;
                hi_at = l;
            }
        }
        tracker.offer(std::max(0.0, hi - lo), [&] {
            return "settings=" + std::string(to_string(p)) + " p(lambda=" + std::to_string(hi_at) +
                   ")=" + std::to_string(hi) + " vs p(lambda=" + std::to_string(lo_at) + ")=" + std::to_string(lo);
        });
    }
    return std::move(tracker).result();
}

const AssumptionRecord& AssumptionReport::operator[](std::string_view name) const {
    for (const auto& r : records) {
        if (r.name == name) return r;
    }
    throw std::out_of_range("no assumption named " + std::string(name));
}

bool AssumptionReport::all_hold() const {
    return std::all_of(records.begin(), records.end(), [](const AssumptionRecord& r) { return r.holds; });
}

namespace {

AssumptionRecord make_record(std::string name, Deviation d, std::string note = {}) {
    AssumptionRecord r;
    r.name = std::move(name);
    r.max_deviation = d.value;
    r.holds = d.value <= kTolerance;
    r.worst_witness = std::move(d.witness);
    r.note = std::move(note);
    return r;
}

}  // namespace

AssumptionReport assumption_report(const FiniteMicrostateModel& m, const DetectionPolicy& detection,
                                   const SettingPolicy& settings, const MemoryRule& memory) {
    if (detection.microstate_count() != m.size()) {
        throw DomainError("detection policy covers " + std::to_string(detection.microstate_count()) +
                          " microstates, model has " + std::to_string(m.size()));
    }
    if (settings.microstate_count() != m.size()) {
        throw DomainError("setting policy covers " + std::to_string(settings.microstate_count()) +
                          " microstates, model has " + std::to_string(m.size()));
    }

    AssumptionReport report;
    report.records.push_back(make_record("factorability", check_factorability(m)));
    report.records.push_back(make_record("parameter_independence", check_parameter_independence(m)));
    report.records.push_back(make_record("outcome_independence", check_outcome_independence(m)));
    report.records.push_back(make_record("no_signalling", check_no_signalling(m),
                                         "listed next to parameter_independence; neither is singled out as the "
                                         "locality condition"));
    report.records.push_back(make_record("fair_detection", check_fair_detection(detection)));
    report.records.push_back(make_record(
        "no_conspiracy", check_no_conspiracy(settings),
        "covers backward causation too: settings correlated with the microstate in either causal direction"));

    Deviation mem;
    if (!memory.is_memoryless()) {
        // Judged by the rule's declared class, not its current strength.
        mem.value = 1.0;
        mem.witness =
            "rule=" + std::string(to_string(memory.kind())) + " strength=" + std::to_string(memory.strength());
    }
    report.records.push_back(make_record("memoryless", std::move(mem)));
    report.structural.push_back(
        make_record("single_valued", {}, "one actual outcome per side per round; holds by construction"));

    const bool fact = report["factorability"].holds;
    const bool pi = report["parameter_independence"].holds;
    const bool oi = report["outcome_independence"].holds;
    const bool ns = report["no_signalling"].holds;
    if (fact && !(pi && oi)) throw InconsistentReport("factorability holds but PI or OI fails");
    if (pi && !ns) throw InconsistentReport("parameter independence holds but no-signalling fails");
    return report;
}

}  // namespace bellab
