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

#include "bellab/json_io.hpp"

#include <cmath>

#include <json.hpp>

#include "bellab/errors.hpp"

namespace bellab {

namespace {

using nlohmann::ordered_json;

ordered_json quartet_json(const ObservableQuartet& q) {
    ordered_json out = ordered_json::array();
    for (std::size_t o = 0; o < 4; ++o) out.push_back(q.outcomes(static_cast<Observable>(o)));
    return out;
}

ordered_json tally_json(const PairTally& t) {
    ordered_json counts = ordered_json::array();
    for (std::size_t a = 0; a < t.rows(); ++a) {
        for (std::size_t b = 0; b < t.cols(); ++b) {
            for (bool da : {false, true}) {
                for (bool db : {false, true}) counts.push_back(t.count(a, b, da, db));
            }
        }
    }
    return ordered_json{{"rows", t.rows()}, {"cols", t.cols()}, {"counts", std::move(counts)}};
}

ordered_json certificate_json(const InfeasibilityCertificate& c) {
    ordered_json out;
    if (c.list_index >= 0) {
        out["list"] = c.list_index;
        out["list_name"] = std::string(chsh_list_name(static_cast<std::size_t>(c.list_index)));
    } else {
        out["list"] = nullptr;
        out["list_name"] = nullptr;
    }
    out["sign"] = c.sign;
    out["slack"] = c.slack;
    out["farkas"] = c.farkas;
    return out;
}

ordered_json feasibility_body(const FeasibilityResult& r) {
    ordered_json out;
    out["status"] = std::string(to_string(r.status));
    out["residual"] = r.residual;
    out["exact"] = r.exact;
    if (r.witness) {
        const auto t = r.witness->table();
        out["witness"] = std::vector<double>(t.begin(), t.end());
    } else {
        out["witness"] = nullptr;
    }
    out["certificate"] = r.certificate ? certificate_json(*r.certificate) : ordered_json(nullptr);
    return out;
}

}  // namespace

std::string run_result_json(const RunResult& r, const ObservableQuartet& q, const std::string& model_source,
                            std::span<const BlockEstimate> blocks) {
    ordered_json doc;
    doc["schema"] = kRunResultSchema;
    doc["model"] = model_source;
    doc["quartet"] = quartet_json(q);
    doc["rounds"] = r.rounds;
    doc["seed"] = r.seed;
    doc["estimator"] = std::string(to_string(r.estimator));
    doc["sequential"] = r.sequential;

    ordered_json corr;
    for (SettingPair p : kSettingPairs) {
        const std::size_t i = index(p);
        corr[std::string(to_string(p))] = ordered_json{
            {"value", r.correlations.values[p]}, {"se", r.correlations.se[i]}, {"events", r.correlations.counts[i]}};
    }
    doc["correlations"] = std::move(corr);

    ordered_json lists = ordered_json::array();
    for (std::size_t l = 0; l < 4; ++l) {
        lists.push_back(
            {{"name", std::string(chsh_list_name(l))}, {"value", r.chsh.values[l]}, {"se", r.chsh.se[l]}});
    }
    doc["chsh"] = ordered_json{
        {"lists", std::move(lists)}, {"max", r.chsh.max}, {"max_se", r.chsh.max_se}, {"argmax", r.chsh.argmax}};

    ordered_json tallies;
    for (SettingPair p : kSettingPairs) tallies[std::string(to_string(p))] = tally_json(r.tallies.pairs[index(p)]);
    doc["tallies"] = std::move(tallies);

    if (!blocks.empty()) {
        ordered_json bs = ordered_json::array();
        for (const auto& b : blocks) {
            bs.push_back({{"end_round", b.end_round},
                          {"block_max", b.block_max},
                          {"block_se", b.block_se},
                          {"cumulative_max", b.cumulative_max},
                          {"cumulative_se", b.cumulative_se}});
        }
        doc["blocks"] = std::move(bs);
    }
    return doc.dump(2) + "\n";
}

std::vector<std::string> validate_run_result_json(const std::string& text) {
    std::vector<std::string> problems;
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        return {std::string("not JSON: ") + e.what()};
    }
    auto need = [&](const ordered_json& obj, const std::string& path, const char* key, auto&& is_type,
                    const char* type) -> const ordered_json* {
        if (!obj.is_object() || !obj.contains(key)) {
            problems.push_back(path + "/" + key + ": missing");
            return nullptr;
        }
        const ordered_json& v = obj[key];
        if (!is_type(v)) {
            problems.push_back(path + "/" + key + ": expected " + type);
            return nullptr;
        }
        return &v;
    };
    const auto is_string = [](const ordered_json& v) { return v.is_string(); };
    const auto is_uint = [](const ordered_json& v) { return v.is_number_unsigned(); };
    const auto is_number = [](const ordered_json& v) { return v.is_number(); };
    const auto is_bool = [](const ordered_json& v) { return v.is_boolean(); };
    const auto is_object = [](const ordered_json& v) { return v.is_object(); };
    const auto is_array = [](const ordered_json& v) { return v.is_array(); };

    if (const auto* s = need(doc, "", "schema", is_string, "string"); s && *s != kRunResultSchema) {
        problems.push_back("/schema: expected " + std::string(kRunResultSchema));
    }
    need(doc, "", "model", is_string, "string");
    need(doc, "", "seed", is_uint, "unsigned integer");
    need(doc, "", "sequential", is_bool, "boolean");
    const auto* rounds = need(doc, "", "rounds", is_uint, "unsigned integer");
    const auto* est = need(doc, "", "estimator", is_string, "string");
    const auto* quartet = need(doc, "", "quartet", is_array, "array");
    const auto* corr = need(doc, "", "correlations", is_object, "object");
    const auto* chsh = need(doc, "", "chsh", is_object, "object");
    const auto* tallies = need(doc, "", "tallies", is_object, "object");
    if (!problems.empty()) return problems;

    Estimator estimator = Estimator::coincidence_only;
    if (*est == "zero") {
        estimator = Estimator::undetected_as_zero;
    } else if (*est != "coincidence") {
        problems.push_back("/estimator: expected coincidence or zero");
        return problems;
    }

    std::optional<ObservableQuartet> q;
    try {
        if (quartet->size() != 4) throw DomainError("expected four outcome lists");
        std::array<std::vector<double>, 4> lists;
        for (std::size_t o = 0; o < 4; ++o) lists[o] = (*quartet)[o].get<std::vector<double>>();
        q.emplace(lists[0], lists[1], lists[2], lists[3]);
    } catch (const std::exception& e) {
        problems.push_back(std::string("/quartet: ") + e.what());
        return problems;
    }

    Tallies t(*q);
    for (SettingPair p : kSettingPairs) {
        const std::string key(to_string(p));
        const std::string path = "/tallies/" + key;
        const auto* pair = need(*tallies, "/tallies", key.c_str(), is_object, "object");
        if (!pair) continue;
        const auto* rows = need(*pair, path, "rows", is_uint, "unsigned integer");
        const auto* cols = need(*pair, path, "cols", is_uint, "unsigned integer");
        const auto* counts = need(*pair, path, "counts", is_array, "array");
        if (!rows || !cols || !counts) continue;
        if (rows->get<std::size_t>() != q->rows(p) || cols->get<std::size_t>() != q->cols(p)) {
            problems.push_back(path + ": shape does not match the quartet");
            continue;
        }
        if (counts->size() != q->rows(p) * q->cols(p) * 4) {
            problems.push_back(path + "/counts: wrong length");
            continue;
        }
        std::size_t k = 0;
        for (std::size_t a = 0; a < q->rows(p); ++a) {
            for (std::size_t b = 0; b < q->cols(p); ++b) {
                for (bool da : {false, true}) {
                    for (bool db : {false, true}) {
                        const auto& c = (*counts)[k++];
                        if (!c.is_number_unsigned()) {
                            problems.push_back(path + "/counts: expected unsigned integers");
                            return problems;
                        }
                        t.pairs[index(p)].add(a, b, da, db, c.get<std::uint64_t>());
                    }
                }
            }
        }
    }
    if (!problems.empty()) return problems;
    if (t.rounds() != rounds->get<std::uint64_t>()) problems.push_back("/tallies: counts do not add up to rounds");

    CorrelationEstimate expect;
    try {
        expect = estimate_correlations(t, *q, estimator);
    } catch (const Error& e) {
        problems.push_back(std::string("/tallies: ") + e.what());
        return problems;
    }
    const auto close = [](double a, double b) { return std::fabs(a - b) <= 1e-12; };
    for (SettingPair p : kSettingPairs) {
        const std::string key(to_string(p));
        const std::string path = "/correlations/" + key;
        const auto* c = need(*corr, "/correlations", key.c_str(), is_object, "object");
        if (!c) continue;
        const auto* v = need(*c, path, "value", is_number, "number");
        const auto* se = need(*c, path, "se", is_number, "number");
        const auto* ev = need(*c, path, "events", is_uint, "unsigned integer");
        const std::size_t i = index(p);
        if (v && !close(v->get<double>(), expect.values[p])) {
            problems.push_back(path + "/value: disagrees with tallies");
        }
        if (se && !close(se->get<double>(), expect.se[i])) problems.push_back(path + "/se: disagrees with tallies");
        if (ev && ev->get<std::uint64_t>() != expect.counts[i]) {
            problems.push_back(path + "/events: disagrees with tallies");
        }
    }

    const ChshEstimate ch = chsh_estimate(expect);
    if (const auto* lists = need(*chsh, "/chsh", "lists", is_array, "array")) {
        if (lists->size() != 4) {
            problems.push_back("/chsh/lists: expected four lists");
        } else {
            for (std::size_t l = 0; l < 4; ++l) {
                const std::string path = "/chsh/lists/" + std::to_string(l);
                const auto* v = need((*lists)[l], path, "value", is_number, "number");
                need((*lists)[l], path, "se", is_number, "number");
                need((*lists)[l], path, "name", is_string, "string");
                if (v && !close(v->get<double>(), ch.values[l])) {
                    problems.push_back(path + "/value: disagrees with tallies");
                }
            }
        }
    }
    if (const auto* m = need(*chsh, "/chsh", "max", is_number, "number"); m && !close(m->get<double>(), ch.max)) {
        problems.push_back("/chsh/max: disagrees with tallies");
    }
    need(*chsh, "/chsh", "max_se", is_number, "number");
    if (const auto* a = need(*chsh, "/chsh", "argmax", is_uint, "unsigned integer");
        a && a->get<std::size_t>() != ch.argmax) {
        problems.push_back("/chsh/argmax: disagrees with tallies");
    }
    if (doc.contains("blocks") && !doc["blocks"].is_array()) problems.push_back("/blocks: expected array");
    return problems;
}

std::string assumption_report_json(const AssumptionReport& report, const std::string& model_source) {
    ordered_json doc;
    doc["schema"] = kAssumptionReportSchema;
    doc["model"] = model_source;
    doc["all_hold"] = report.all_hold();
    ordered_json records = ordered_json::array();
    for (const auto& r : report.records) {
        records.push_back({{"name", r.name},
                           {"holds", r.holds},
                           {"max_deviation", r.max_deviation},
                           {"worst_witness", r.worst_witness},
                           {"note", r.note}});
    }
    doc["assumptions"] = std::move(records);
    ordered_json structural = ordered_json::array();
    for (const auto& r : report.structural) {
        structural.push_back({{"name", r.name}, {"holds", r.holds}, {"note", r.note}});
    }
    doc["structural"] = std::move(structural);
    // Flat name -> holds view for quick lookups.
    ordered_json flags;
    for (const auto& r : report.records) flags[r.name] = r.holds;
    doc["holds"] = std::move(flags);
    return doc.dump(2) + "\n";
}

std::string feasibility_json(const CorrelationSet& c, const FeasibilityResult& correlations_only,
                             const std::optional<std::array<double, 4>>& singles,
                             const std::optional<FeasibilityResult>& with_singles) {
    ordered_json doc;
    doc["schema"] = kFeasibilitySchema;
    doc["correlations"] = std::vector<double>(c.values().begin(), c.values().end());
    doc["chsh_lists"] = chsh_list_values(c);
    const ordered_json body = feasibility_body(correlations_only);
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
    if (singles) {
        doc["singles"] = *singles;
        doc["with_singles"] = with_singles ? feasibility_body(*with_singles) : ordered_json(nullptr);
    }
    return doc.dump(2) + "\n";
}

}  // namespace bellab
