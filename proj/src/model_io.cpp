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

#include "bellab/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "bellab/errors.hpp"
#include "bellab/oracle.hpp"
#include "bellab/random_models.hpp"

namespace bellab {

namespace {

using nlohmann::json;

// Character iterator that remembers the line of the last non-blank character
// the parser consumed.
struct LineState {
    std::size_t line = 1;
    std::size_t last_token_line = 1;
};

class LineIterator {
  public:
    using iterator_category = std::input_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    LineIterator() = default;
    LineIterator(const char* p, LineState* s) : p_(p), s_(s) {}

    reference operator*() const { return *p_; }
    LineIterator& operator++() {
        const char c = *p_;
        if (c == '\n') {
            ++s_->line;
        } else if (c != ' ' && c != '\t' && c != '\r') {
            s_->last_token_line = s_->line;
        }
        ++p_;
        return *this;
    }
    LineIterator operator++(int) {
        LineIterator old = *this;
        ++*this;
        return old;
    }
    bool operator==(const LineIterator& o) const { return p_ == o.p_; }
    bool operator!=(const LineIterator& o) const { return p_ != o.p_; }

  private:
    const char* p_ = nullptr;
    LineState* s_ = nullptr;
};

std::string escape_pointer(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

// Records the source line of every value, keyed by JSON pointer.
class LineMapper : public nlohmann::json_sax<json> {
  public:
    explicit LineMapper(const LineState* s) : s_(s) {}

    bool null() override { return value(); }
    bool boolean(bool) override { return value(); }
    bool number_integer(number_integer_t) override { return value(); }
    bool number_unsigned(number_unsigned_t) override { return value(); }
    bool number_float(number_float_t, const string_t&) override { return value(); }
    bool string(string_t&) override { return value(); }
    bool binary(binary_t&) override { return value(); }
    bool start_object(std::size_t) override {
        record();
        frames_.push_back({false, 0, {}});
        return true;
    }
    bool key(string_t& k) override {
        frames_.back().key = k;
        return true;
    }
    bool end_object() override { return close(); }
    bool start_array(std::size_t) override {
        record();
        frames_.push_back({true, 0, {}});
        return true;
    }
    bool end_array() override { return close(); }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

    std::map<std::string, std::size_t> lines;

  private:
    struct Frame {
        bool array;
        std::size_t index;
        std::string key;
    };

    std::string pointer() const {
        std::string p;
        for (const auto& f : frames_) {
            p += '/';
            p += f.array ? std::to_string(f.index) : escape_pointer(f.key);
        }
        return p;
    }
    void record() { lines.emplace(pointer(), s_->last_token_line); }
    void advance() {
        if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
    }
    bool value() {
        record();
        advance();
        return true;
    }
    bool close() {
        frames_.pop_back();
        advance();
        return true;
    }

    const LineState* s_;
    std::vector<Frame> frames_;
};

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

class Reader {
  public:
    Reader(std::string origin, std::map<std::string, std::size_t> lines)
        : origin_(std::move(origin)), lines_(std::move(lines)) {}

    [[noreturn]] void fail(const std::string& ptr, const std::string& what) const {
        std::size_t line = 0;
        // Fall back to the nearest enclosing value.
        for (std::string p = ptr;; p = p.substr(0, p.rfind('/'))) {
            if (auto it = lines_.find(p); it != lines_.end()) {
                line = it->second;
                break;
            }
            if (p.empty()) break;
        }
        throw ModelFileError(origin_, line, (ptr.empty() ? std::string("document") : ptr) + ": " + what);
    }

    const json& member(const json& obj, const std::string& ptr, const char* key) const {
        if (!obj.contains(key)) fail(ptr, std::string("missing field '") + key + "'");
        return obj.at(key);
    }

    void require_object(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) const {
        if (!j.is_object()) fail(ptr, "expected an object");
        for (const auto& [k, v] : j.items()) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) fail(ptr + "/" + escape_pointer(k), "unknown field '" + k + "'");
        }
    }

    double number(const json& j, const std::string& ptr) const {
        if (!j.is_number()) fail(ptr, "expected a number");
        return j.get<double>();
    }

    std::vector<double> numbers(const json& j, const std::string& ptr) const {
        if (!j.is_array()) fail(ptr, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], ptr + "/" + std::to_string(i)));
        return out;
    }

    // A scalar broadcast over microstates or one value per microstate.
    std::vector<double> per_microstate(const json& j, const std::string& ptr, std::size_t n) const {
        if (j.is_number()) return std::vector<double>(n, j.get<double>());
        auto v = numbers(j, ptr);
        if (v.size() != n) {
            fail(ptr, "expected " + std::to_string(n) + " entries, one per microstate, got " +
                          std::to_string(v.size()));
        }
        return v;
    }

    template <class F>
    auto guarded(const std::string& ptr, F&& f) const {
        try {
            return f();
        } catch (const ModelFileError&) {
            throw;
        } catch (const Error& e) {
            fail(ptr, e.what());
        }
    }

  private:
    std::string origin_;
    std::map<std::string, std::size_t> lines_;
};

constexpr const char* kObservableKeys[4] = {"A", "Ap", "B", "Bp"};
constexpr const char* kPairKeys[4] = {"AB", "ABp", "ApB", "ApBp"};

ObservableQuartet read_quartet(const Reader& r, const json& doc) {
    if (!doc.contains("quartet")) return ObservableQuartet{};
    const json& j = doc["quartet"];
    if (!j.is_array() || j.size() != 4) r.fail("/quartet", "expected four outcome arrays (A, A', B, B')");
    std::array<std::vector<double>, 4> lists;
    for (std::size_t i = 0; i < 4; ++i) lists[i] = r.numbers(j[i], "/quartet/" + std::to_string(i));
    return r.guarded("/quartet", [&] { return ObservableQuartet(lists[0], lists[1], lists[2], lists[3]); });
}

Microstate read_microstate(const Reader& r, const json& j, const std::string& ptr, const ObservableQuartet& q) {
    r.require_object(j, ptr, {"weight", "behaviour", "local_response"});
    const double weight = r.number(r.member(j, ptr, "weight"), ptr + "/weight");
    const bool has_b = j.contains("behaviour");
    const bool has_l = j.contains("local_response");
    if (has_b == has_l) r.fail(ptr, "needs exactly one of 'behaviour' or 'local_response'");

    if (has_l) {
        const std::string lp = ptr + "/local_response";
        const json& lj = j["local_response"];
        r.require_object(lj, lp, {"A", "Ap", "B", "Bp"});
        std::array<std::vector<double>, 4> d;
        for (std::size_t o = 0; o < 4; ++o) {
            d[o] = r.numbers(r.member(lj, lp, kObservableKeys[o]), lp + "/" + kObservableKeys[o]);
        }
        LocalResponse resp = r.guarded(lp, [&] { return LocalResponse(q, std::move(d)); });
        ConditionalBehaviour b = resp.behaviour(q);
        return Microstate{weight, std::move(b), std::move(resp)};
    }

    const std::string bp = ptr + "/behaviour";
    const json& bj = j["behaviour"];
    r.require_object(bj, bp, {"AB", "ABp", "ApB", "ApBp"});
    std::array<std::vector<double>, 4> tables;
    for (SettingPair p : kSettingPairs) {
        const std::string tp = bp + "/" + kPairKeys[index(p)];
        const json& t = r.member(bj, bp, kPairKeys[index(p)]);
        if (!t.is_array() || t.size() != q.rows(p)) {
            r.fail(tp, "expected " + std::to_string(q.rows(p)) + " rows, one per A-side outcome");
        }
        for (std::size_t a = 0; a < t.size(); ++a) {
            const std::string rp = tp + "/" + std::to_string(a);
            auto row = r.numbers(t[a], rp);
            if (row.size() != q.cols(p)) {
                r.fail(rp, "expected " + std::to_string(q.cols(p)) + " columns, one per B-side outcome");
            }
            for (std::size_t b = 0; b < row.size(); ++b) {
                if (!(row[b] >= 0.0)) r.fail(rp + "/" + std::to_string(b), "probabilities must be non-negative");
            }
            tables[index(p)].insert(tables[index(p)].end(), row.begin(), row.end());
        }
        double sum = 0.0;
        for (double x : tables[index(p)]) sum += x;
        if (std::fabs(sum - 1.0) > kTolerance) r.fail(tp, "table sums to " + std::to_string(sum) + ", not 1");
    }
    return Microstate{weight, r.guarded(bp, [&] { return ConditionalBehaviour(q, std::move(tables)); }),
                      std::nullopt};
}

}  // namespace

ModelBundle parse_model(std::string_view text, const std::string& origin) {
    LineState state;
    LineMapper mapper(&state);
    const bool ok = json::sax_parse(LineIterator(text.data(), &state), LineIterator(text.data() + text.size(), &state),
                                    &mapper, nlohmann::detail::input_format_t::json, false);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::string msg = e.what();
        const auto pos = msg.find("syntax error");
        throw ModelFileError(origin, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1),
                             pos == std::string::npos ? msg : msg.substr(pos));
    }
    if (!ok) throw ModelFileError(origin, state.line, "malformed JSON");

    const Reader r(origin, std::move(mapper.lines));
    r.require_object(doc, "", {"quartet", "microstates", "detection", "setting_policy", "memory"});
    const ObservableQuartet q = read_quartet(r, doc);

    const json& ms = r.member(doc, "", "microstates");
    if (!ms.is_array() || ms.empty()) r.fail("/microstates", "expected a non-empty array of microstates");
    std::vector<Microstate> micro;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        micro.push_back(read_microstate(r, ms[i], "/microstates/" + std::to_string(i), q));
    }
    const std::size_t n = micro.size();
    FiniteMicrostateModel model = r.guarded("/microstates", [&] { return FiniteMicrostateModel(q, std::move(micro)); });

    DetectionPolicy detection = DetectionPolicy::perfect(n);
    if (doc.contains("detection")) {
        const json& dj = doc["detection"];
        r.require_object(dj, "/detection", {"A", "Ap", "B", "Bp"});
        std::array<std::vector<double>, 4> t;
        for (std::size_t o = 0; o < 4; ++o) {
            const std::string p = std::string("/detection/") + kObservableKeys[o];
            t[o] = dj.contains(kObservableKeys[o]) ? r.per_microstate(dj[kObservableKeys[o]], p, n)
                                                    : std::vector<double>(n, 1.0);
        }
        detection = r.guarded("/detection", [&] { return DetectionPolicy(std::move(t)); });
    }

    SettingPolicy settings = SettingPolicy::uniform(n);
    if (doc.contains("setting_policy")) {
        const json& sj = doc["setting_policy"];
        r.require_object(sj, "/setting_policy", {"AB", "ABp", "ApB", "ApBp"});
        std::vector<std::array<double, 4>> rows(n);
        for (std::size_t p = 0; p < 4; ++p) {
            const auto col = r.per_microstate(r.member(sj, "/setting_policy", kPairKeys[p]),
                                              std::string("/setting_policy/") + kPairKeys[p], n);
            for (std::size_t l = 0; l < n; ++l) rows[l][p] = col[l];
        }
        settings = r.guarded("/setting_policy", [&] { return SettingPolicy(std::move(rows)); });
    }

    MemoryRule memory;
    if (doc.contains("memory")) {
        const json& mj = doc["memory"];
        r.require_object(mj, "/memory", {"rule", "strength"});
        const json& rule = r.member(mj, "/memory", "rule");
        if (!rule.is_string()) r.fail("/memory/rule", "expected a string");
        const std::string name = rule.get<std::string>();
        if (name == "memoryless") {
            if (mj.contains("strength")) r.fail("/memory/strength", "the memoryless rule takes no parameters");
        } else if (name == "adaptive") {
            const double s = mj.contains("strength") ? r.number(mj["strength"], "/memory/strength") : 1.0;
            memory = r.guarded("/memory/strength", [&] { return MemoryRule::adaptive(s); });
        } else {
            r.fail("/memory/rule", "unknown rule '" + name + "' (expected memoryless or adaptive)");
        }
    }

    return ModelBundle{std::move(model), std::move(detection), std::move(settings), memory, origin};
}

namespace {

std::map<std::string, std::string> parse_query(std::string_view spec, std::string_view query) {
    std::map<std::string, std::string> out;
    while (!query.empty()) {
        const auto amp = query.find('&');
        const std::string_view item = query.substr(0, amp);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw ModelFileError(std::string(spec), 0, "malformed parameter '" + std::string(item) + "'");
        }
        out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
        query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
    }
    return out;
}

template <class T>
T parse_value(std::string_view spec, const std::string& key, std::string_view text) {
    T v{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw ModelFileError(std::string(spec), 0, "bad value '" + std::string(text) + "' for '" + key + "'");
    }
    return v;
}

void reject_unknown(std::string_view spec, const std::map<std::string, std::string>& params,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : params) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw ModelFileError(std::string(spec), 0, "unknown parameter '" + k + "'");
    }
}

ModelBundle with_defaults(FiniteMicrostateModel m, std::string source) {
    const std::size_t n = m.size();
    return ModelBundle{std::move(m), DetectionPolicy::perfect(n), SettingPolicy::uniform(n), MemoryRule{},
                       std::move(source)};
}

}  // namespace

ModelBundle builtin_model(std::string_view spec) {
    constexpr std::string_view prefix = "builtin:";
    if (!spec.starts_with(prefix)) throw ModelFileError(std::string(spec), 0, "not a builtin model");
    std::string_view rest = spec.substr(prefix.size());
    const auto qm = rest.find('?');
    const std::string name(rest.substr(0, qm));
    const auto params = parse_query(spec, qm == std::string_view::npos ? std::string_view{} : rest.substr(qm + 1));
    const std::string source(spec);

    try {
        if (name == "singlet") {
            reject_unknown(spec, params, {"angles"});
            AnalyzerAngles angles = AnalyzerAngles::standard();
            if (auto it = params.find("angles"); it != params.end()) {
                std::vector<double> deg;
                std::string_view list = it->second;
                while (true) {
                    const auto comma = list.find(',');
                    deg.push_back(parse_value<double>(spec, "angles", list.substr(0, comma)));
                    if (comma == std::string_view::npos) break;
                    list = list.substr(comma + 1);
                }
                if (deg.size() != 4) throw ModelFileError(source, 0, "'angles' needs four values in degrees");
                angles = AnalyzerAngles::degrees(deg[0], deg[1], deg[2], deg[3]);
            }
            return with_defaults(FiniteMicrostateModel::single(ObservableQuartet{}, singlet_behaviour(angles)),
                                 source);
        }
        if (name == "prbox") {
            reject_unknown(spec, params, {});
            return with_defaults(FiniteMicrostateModel::single(ObservableQuartet{}, pr_box()), source);
        }
        if (name == "detection-loophole") {
            reject_unknown(spec, params, {});
            LoopholeFixture f = detection_loophole_fixture();
            const std::size_t n = f.model.size();
            return ModelBundle{std::move(f.model), std::move(f.detection), SettingPolicy::uniform(n), MemoryRule{},
                               source};
        }
        if (name == "strategies") {
            reject_unknown(spec, params, {});
            return with_defaults(deterministic_strategies_model(), source);
        }
        if (name == "adaptive-memory") {
            reject_unknown(spec, params, {"strength"});
            double s = 1.0;
            if (auto it = params.find("strength"); it != params.end()) {
                s = parse_value<double>(spec, "strength", it->second);
            }
            ModelBundle b = with_defaults(deterministic_strategies_model(), source);
            b.memory = MemoryRule::adaptive(s);
            return b;
        }
        if (name == "random-local") {
            reject_unknown(spec, params, {"seed", "microstates"});
            std::uint64_t seed = 0;
            std::size_t n = 8;
            if (auto it = params.find("seed"); it != params.end()) {
                seed = parse_value<std::uint64_t>(spec, "seed", it->second);
            }
            if (auto it = params.find("microstates"); it != params.end()) {
                n = parse_value<std::size_t>(spec, "microstates", it->second);
            }
            if (n == 0) throw ModelFileError(source, 0, "'microstates' must be positive");
            Rng rng(seed);
            return with_defaults(random_local_model(rng, n), source);
        }
    } catch (const ModelFileError&) {
        throw;
    } catch (const Error& e) {
        throw ModelFileError(source, 0, e.what());
    }
    throw ModelFileError(source, 0,
                         "unknown builtin '" + name +
                             "' (expected singlet, prbox, detection-loophole, strategies, adaptive-memory or "
                             "random-local)");
}

ModelBundle load_model(const std::string& source) {
    if (source.starts_with("builtin:")) return builtin_model(source);
    std::ifstream in(source, std::ios::binary);
    if (!in) throw ModelFileError(source, 0, "cannot open model file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str(), source);
}

}  // namespace bellab
