// adwords_lab: experiments, verification suite, alpha numerics, adversary and instance generation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adwords/adwords.hpp"

namespace {

using namespace adwords;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("I/O failure writing " + path);
}

nlohmann::json parse_params(const std::string& s) {
    if (s.empty()) return nlohmann::json::object();
    try {
        return nlohmann::json::parse(s);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("params", e.what());
    }
}

struct RunArgs {
    std::string config, instance, generator, params, benchmark = "lp", json, csv;
    std::vector<std::string> policies;
    double beta = kDefaultBeta;
    std::string tieBreak = "lowest-id";
    long long trials = 100;
    std::uint64_t seed = 0;
};

int cmd_run(const RunArgs& a) {
    ExperimentConfig cfg;
    if (!a.config.empty()) {
        std::ifstream in(a.config);
        if (!in) throw Error("cannot open config " + a.config);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError("config", e.what());
        }
        cfg = config_from_json(j);
    } else {
        if (!a.instance.empty()) cfg.instanceFile = a.instance;
        cfg.generator = a.generator;
        cfg.params = parse_params(a.params);
        for (const auto& p : a.policies) cfg.policies.push_back({p, a.beta, tie_break_from_string(a.tieBreak)});
        if (a.trials < 1) throw SchemaError("trials", "must be >= 1");
        cfg.trials = static_cast<std::size_t>(a.trials);
        cfg.rngSeed = a.seed;
        cfg.benchmark = offline_kind_from_string(a.benchmark);
    }
    if (!a.json.empty()) cfg.jsonOut = a.json;
    if (!a.csv.empty()) cfg.csvOut = a.csv;
    cfg.validate();

    const RatioReport rep = run_experiment(cfg);
    if (!cfg.jsonOut.empty()) emit_report(rep, ReportFormat::Json, cfg.jsonOut);
    if (!cfg.csvOut.empty()) emit_report(rep, ReportFormat::Csv, cfg.csvOut);
    if (cfg.jsonOut.empty() && cfg.csvOut.empty()) emit_report({rep}, ReportFormat::Json, std::cout);

    int code = kOk;
    for (const auto& p : rep.policies)
        for (const auto& f : p.flags) {
            std::cerr << "flag: " << p.policy.name << ": " << f << '\n';
            if (f == "exceeds-lp-benchmark") code = kViolation;
        }
    return code;
}

struct VerifyArgs {
    std::vector<std::string> scopes;
    bool mutate = false;
    std::size_t seeds = 20;
    std::string corpus, report;
    bool quiet = false;
};

int cmd_verify(const VerifyArgs& a) {
    VerifyOptions o;
    o.scopes = parse_scopes(a.scopes);
    o.mutateAugmented = a.mutate;
    o.outerSeeds = a.seeds;
    if (!a.corpus.empty()) o.corpusDir = a.corpus;
    const VerificationReport rep = run_verification_suite(o);
    for (const auto& f : rep.findings) {
        if (a.quiet && f.report.ok()) continue;
        std::printf("%-5s %-14s %-26s %-22s evaluated=%zu violations=%zu\n", f.report.ok() ? "ok" : "FAIL",
                    f.scope.c_str(), f.report.name.c_str(), f.instance.c_str(), f.report.evaluated,
                    f.report.violationCount);
    }
    for (const auto& n : rep.notes) std::printf("note: %s\n", n.c_str());
    for (const auto& c : rep.failing_checks()) std::printf("failing check: %s\n", c.c_str());
    std::printf("total violations: %zu\n", rep.violations());
    if (!a.report.empty()) write_text(a.report, to_json(rep).dump(2) + "\n");
    return rep.exit_code();
}

struct AlphaArgs {
    double beta = kDefaultBeta;
    bool sweep = false;
    double lo = 1.0, hi = 1.3, step = 0.01;
    std::string figure1, csv;
    std::size_t samples = 1001;
};

int cmd_alpha(const AlphaArgs& a) {
    if (!(a.beta > 0.0)) throw PreconditionError("--beta must be positive");
    if (a.sweep) {
        const BetaSweep s = sweep_beta(beta_grid(a.lo, a.hi, a.step));
        std::ostringstream os;
        write_sweep_csv(s, os);
        write_text(a.csv, os.str());
        std::fprintf(stderr, "best beta=%.6f x_star=%.6f alpha_star=%.9f\n", s.best.beta, s.best.xStar,
                     s.best.alphaStar);
    } else {
        const AlphaMinimum m = minimize_alpha(a.beta);
        const AlphaMinimum q = minimize_alpha(a.beta, 1000, 1e-6, AlphaMethod::Quadrature);
        std::printf("beta=%.6f x_star=%.6f alpha_star=%.9f quadrature_alpha_star=%.9f method_gap=%.3g\n", a.beta, m.x,
                    m.alpha, q.alpha, std::abs(m.alpha - q.alpha));
    }
    if (!a.figure1.empty()) {
        emit_figure1(a.beta, a.samples, a.figure1);
        std::fprintf(a.sweep ? stderr : stdout, "wrote %s (%zu samples)\n", a.figure1.c_str(), a.samples);
    }
    return kOk;
}

struct AdversaryArgs {
    std::size_t n = 10;
    std::string target = "greedy-aware";
    std::string out;
    std::uint64_t seed = 0;
    double beta = kDefaultBeta;
};

int cmd_adversary(const AdversaryArgs& a) {
    const std::string t = normalize_name(a.target);
    AdversaryTranscript tr;
    if (t == "greedy_aware") {
        tr = gen_adversary(a.n, GreedyAwarePolicy{});
    } else if (t == "greedy_oblivious") {
        tr = gen_adversary(a.n, GreedyObliviousPolicy{});
    } else if (t == "msvv") {
        tr = gen_adversary(a.n, MsvvPolicy{});
    } else if (t == "gpg") {
        // GPG with its seeds fixed up front is a deterministic policy.
        tr = gen_adversary(a.n, GpgPolicy(CounterRng(a.seed).seeds(0, a.n), a.beta));
    } else {
        throw PreconditionError("unknown target '" + a.target + "'");
    }
    nlohmann::ordered_json j;
    j["n"] = a.n;
    j["target"] = a.target;
    j["alg"] = tr.algValue;
    j["opt"] = tr.optValue;
    j["ratio"] = tr.ratio();
    j["closedForm"] = static_cast<double>(a.n + 2) / (2.0 * static_cast<double>(a.n + 1));
    j["bigResource"] = tr.bigResource;
    auto& log = j["labels"] = nlohmann::ordered_json::array();
    for (const auto& p : tr.phaseLog)
        log.push_back({{"label", p.label}, {"resource", p.resource}, {"phase", p.phase}, {"arrival", p.arrival}});
    std::cout << j.dump(2) << '\n';
    if (!a.out.empty()) save_instance(tr.instance, a.out);
    return kOk;
}

struct GenArgs {
    std::string generator, params, out, corpus;
    bool list = false;
};

int cmd_gen(const GenArgs& a) {
    if (a.list) {
        for (const auto& e : bundled_corpus_spec()) std::cout << e.name << '\t' << e.generator << '\t' << e.params.dump() << '\n';
        return kOk;
    }
    if (!a.corpus.empty()) {
        write_corpus(a.corpus);
        std::cout << "wrote " << bundled_corpus_spec().size() << " instances to " << a.corpus << '\n';
        return kOk;
    }
    if (a.generator.empty()) throw PreconditionError("gen needs --generator, --corpus or --list");
    const Instance inst = make_generated(a.generator, parse_params(a.params));
    write_text(a.out, dump_instance(inst, 2) + "\n");
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adwords_lab: online budgeted allocation laboratory"};
    app.require_subcommand(1);

    RunArgs run;
    auto* runCmd = app.add_subcommand("run", "Monte-Carlo competitive ratio experiment");
    runCmd->add_option("--config", run.config, "ExperimentConfig JSON file");
    runCmd->add_option("--instance", run.instance, "instance JSON file");
    runCmd->add_option("--generator", run.generator, "generator name");
    runCmd->add_option("--params", run.params, "generator parameters as JSON");
    runCmd->add_option("--policy", run.policies, "policy (repeatable): gpg fgpg greedy-oblivious greedy-aware msvv");
    runCmd->add_option("--beta", run.beta, "trade-off exponent");
    runCmd->add_option("--tie-break", run.tieBreak, "lowest-id or highest-id");
    runCmd->add_option("--trials", run.trials, "seed vectors per randomized policy");
    runCmd->add_option("--seed", run.seed, "64-bit RNG key");
    runCmd->add_option("--benchmark", run.benchmark, "lp, bruteforce or analytic");
    runCmd->add_option("--json", run.json, "JSON report path");
    runCmd->add_option("--csv", run.csv, "CSV report path");

    VerifyArgs ver;
    auto* verCmd = app.add_subcommand("verify", "run the lemma and certificate checks on the bundled corpus");
    verCmd->add_option("--scope", ver.scopes, "alpha lemmas augmentation decomposable classic_pd all")->delimiter(',');
    verCmd->add_flag("--mutate", ver.mutate, "invert the tie-break of the augmented run (must fail)");
    verCmd->add_option("--seeds", ver.seeds, "outer seed vectors per instance");
    verCmd->add_option("--corpus", ver.corpus, "corpus directory (default: regenerate in memory)");
    verCmd->add_option("--report", ver.report, "write the JSON report here");
    verCmd->add_flag("--quiet", ver.quiet, "print failing checks only");

    AlphaArgs al;
    auto* alCmd = app.add_subcommand("alpha", "competitive-ratio function of the exponential trade-off");
    alCmd->add_option("--beta", al.beta, "trade-off exponent");
    alCmd->add_flag("--sweep", al.sweep, "sweep beta and print the CSV table");
    alCmd->add_option("--sweep-lo", al.lo, "sweep start");
    alCmd->add_option("--sweep-hi", al.hi, "sweep end");
    alCmd->add_option("--sweep-step", al.step, "sweep step");
    alCmd->add_option("--csv", al.csv, "sweep CSV path (default stdout)");
    alCmd->add_option("--figure1", al.figure1, "write the alpha curve as TSV");
    alCmd->add_option("--samples", al.samples, "curve samples");

    AdversaryArgs adv;
    auto* advCmd = app.add_subcommand("adversary", "adaptive upper-bound instance against a deterministic policy");
    advCmd->add_option("--n", adv.n, "number of resources")->check(CLI::Range(2, 100000));
    advCmd->add_option("--target", adv.target, "greedy-aware greedy-oblivious msvv gpg");
    advCmd->add_option("--out", adv.out, "save the constructed instance");
    advCmd->add_option("--seed", adv.seed, "seed key for the gpg target");
    advCmd->add_option("--beta", adv.beta, "beta for the gpg target");

    GenArgs gen;
    auto* genCmd = app.add_subcommand("gen", "emit instance JSON");
    genCmd->add_option("--generator", gen.generator, "generator name");
    genCmd->add_option("--params", gen.params, "generator parameters as JSON");
    genCmd->add_option("--out", gen.out, "output path (default stdout)");
    genCmd->add_option("--corpus", gen.corpus, "write the bundled corpus into this directory");
    genCmd->add_flag("--list", gen.list, "list the bundled corpus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*runCmd) return cmd_run(run);
        if (*verCmd) return cmd_verify(ver);
        if (*alCmd) return cmd_alpha(al);
        if (*advCmd) return cmd_adversary(adv);
        if (*genCmd) return cmd_gen(gen);
    } catch (const DeterminismError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kViolation;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
