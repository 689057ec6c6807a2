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

#include "bellab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "bellab/diagnostics.hpp"
#include "bellab/errors.hpp"
#include "bellab/json_io.hpp"
#include "bellab/model_io.hpp"
#include "bellab/simulator.hpp"

namespace bellab::cli {

namespace {

std::string shortest(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

unsigned default_threads() {
    if (const char* env = std::getenv(kThreadsEnv)) {
        unsigned n = 0;
        const std::string_view s(env);
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec == std::errc{} && end == s.data() + s.size()) return n;
    }
    return 0;
}

// Writes to --out when given, else to the caller's stream.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
    if (path.empty() || path == "-") {
        out << text;
        out.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot write " + path);
    f << text;
    if (!f) throw DomainError("write failed for " + path);
}

CorrelationSet correlations_from(const std::vector<double>& v) {
    if (v.size() != 4) throw DomainError("--correlations needs four values: AB, AB', A'B, A'B'");
    return CorrelationSet(v[0], v[1], v[2], v[3]);
}

struct Options {
    std::string model;
    std::uint64_t rounds = 100000;
    std::uint64_t seed = 0;
    std::string estimator = "coincidence";
    std::string out;
    unsigned threads = 0;
    std::uint64_t block_size = 0;
    std::vector<double> correlations;
    std::vector<double> singles;
    std::vector<double> eta{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
};

Estimator estimator_from(const std::string& s) {
    return s == "zero" ? Estimator::undetected_as_zero : Estimator::coincidence_only;
}

ExperimentConfig config_for(const ModelBundle& b, const Options& o) {
    ExperimentConfig cfg;
    cfg.rounds = o.rounds;
    cfg.seed = o.seed;
    cfg.setting_policy = b.settings;
    cfg.detection = b.detection;
    cfg.memory = b.memory;
    cfg.estimator = estimator_from(o.estimator);
    cfg.threads = o.threads;
    return cfg;
}

int do_run(const Options& o, std::ostream& out) {
    const ModelBundle b = load_model(o.model);
    const ExperimentConfig cfg = config_for(b, o);
    std::string text;
    if (o.block_size != 0 || !b.memory.is_memoryless()) {
        const auto r = run_memory_model(b.memory, b.model, cfg, o.block_size == 0 ? o.rounds : o.block_size);
        text = run_result_json(r.cumulative, b.model.quartet(), b.source, r.blocks);
    } else {
        text = run_result_json(run_experiment(b.model, cfg), b.model.quartet(), b.source);
    }
    emit(o.out, out, text);
    return kOk;
}

int do_diagnose(const Options& o, std::ostream& out) {
    const ModelBundle b = load_model(o.model);
    const auto report = assumption_report(b.model, b.detection, b.settings, b.memory);
    emit(o.out, out, assumption_report_json(report, b.source));
    return kOk;
}

int do_feasibility(const Options& o, std::ostream& out) {
    const CorrelationSet c = correlations_from(o.correlations);
    std::optional<std::array<double, 4>> singles;
    if (!o.singles.empty()) {
        if (o.singles.size() != 4) throw DomainError("--singles needs four values: A, A', B, B'");
        singles = std::array<double, 4>{o.singles[0], o.singles[1], o.singles[2], o.singles[3]};
    }
    const FeasibilityResult base = lp_feasible_jpd(c, std::nullopt);
    std::optional<FeasibilityResult> full;
    if (singles) full = lp_feasible_jpd(c, singles);
    emit(o.out, out, feasibility_json(c, base, singles, full));
    return kOk;
}

int do_sweep(const Options& o, std::ostream& out) {
    const ModelBundle b = load_model(o.model);
    const auto rows = sweep_efficiency(b.model, config_for(b, o), o.eta);
    std::string text = "eta,max_chsh,se\n";
    for (const auto& r : rows) text += shortest(r.eta) + "," + shortest(r.max_chsh) + "," + shortest(r.se) + "\n";
    emit(o.out, out, text);
    return kOk;
}

int do_chsh(const Options& o, std::ostream& out) {
    const auto v = chsh_list_values(correlations_from(o.correlations));
    emit(o.out, out, shortest(v[0]) + "," + shortest(v[1]) + "," + shortest(v[2]) + "," + shortest(v[3]) + "\n");
    return kOk;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bell-inequality laboratory: hidden-variable models, JPD checks and Monte Carlo runs", "bellab"};
    app.require_subcommand(1);
    Options o;
    o.threads = default_threads();

    auto add_model = [&](CLI::App* s) {
        s->add_option("--model", o.model, "Model file or builtin:NAME[?k=v&...]")->required();
    };
    auto add_out = [&](CLI::App* s) { s->add_option("--out", o.out, "Output file (default standard output)"); };
    auto add_sim = [&](CLI::App* s) {
        s->add_option("--rounds", o.rounds, "Measurement rounds")->check(CLI::PositiveNumber);
        s->add_option("--seed", o.seed, "Random seed");
        s->add_option("--estimator", o.estimator, "coincidence or zero")->check(CLI::IsMember({"coincidence", "zero"}));
        s->add_option("--threads", o.threads,
                      std::string("Worker cap, 0 for all cores (default $") + kThreadsEnv + ")");
    };

    CLI::App* run = app.add_subcommand("run", "Simulate rounds and write a JSON RunResult");
    add_model(run);
    add_sim(run);
    add_out(run);
    run->add_option("--block-size", o.block_size, "Report per-block estimates; must divide --rounds");

    CLI::App* diagnose = app.add_subcommand("diagnose", "Write the JSON AssumptionReport of a model");
    add_model(diagnose);
    add_out(diagnose);

    CLI::App* feas = app.add_subcommand("feasibility", "Decide whether a JPD reproduces the correlations");
    feas->add_option("--correlations", o.correlations, "AB,AB',A'B,A'B'")->delimiter(',')->required();
    feas->add_option("--singles", o.singles, "A,A',B,B' means")->delimiter(',');
    add_out(feas);

    CLI::App* sweep = app.add_subcommand("sweep", "Max CHSH against a detection-efficiency scale, as CSV");
    add_model(sweep);
    add_sim(sweep);
    add_out(sweep);
    sweep->add_option("--eta", o.eta, "Comma-separated efficiency factors")->delimiter(',');

    CLI::App* chsh = app.add_subcommand("chsh", "Print the four CHSH list values");
    chsh->add_option("--correlations", o.correlations, "AB,AB',A'B,A'B'")->delimiter(',')->required();
    add_out(chsh);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        CLI::App* active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << "bellab: " << e.what() << "\n" << active->help();
        return kUsage;
    }

    try {
        if (run->parsed()) return do_run(o, out);
        if (diagnose->parsed()) return do_diagnose(o, out);
        if (feas->parsed()) return do_feasibility(o, out);
        if (sweep->parsed()) return do_sweep(o, out);
        return do_chsh(o, out);
    } catch (const ModelFileError& e) {
        err << "bellab: " << e.what() << "\n";
        return kInvalidModel;
    } catch (const NumericalFailure& e) {
        err << "bellab: numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const NoCoincidences& e) {
        err << "bellab: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const Error& e) {
        err << "bellab: " << e.what() << "\n";
        return kUsage;
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return parse_and_dispatch(args, std::cout, std::cerr);
}

}  // namespace bellab::cli
