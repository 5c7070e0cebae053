#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "adversary.hpp"
#include "certificate.hpp"
#include "fractional.hpp"
#include "generators.hpp"
#include "numerics.hpp"
#include "offline.hpp"
#include "policies.hpp"
#include "rng.hpp"

namespace adwords {

// ---------------------------------------------------------------------------
// Worker pool

/// Worker count: hardware concurrency capped by ADWORDS_LAB_THREADS.
inline std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ADWORDS_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) n = std::min(n, static_cast<std::size_t>(v));
    }
    return n;
}

/// Calls fn(k) for k in [0, count). Results must be written by index so that
/// aggregation order does not depend on scheduling. The first exception is rethrown.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                         std::size_t workers = worker_count()) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t k = next.fetch_add(1);
                if (k >= count) return;
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Policies and generators by name

inline std::string normalize_name(std::string s) {
    std::replace(s.begin(), s.end(), '-', '_');
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline const std::vector<std::string>& registered_policies() {
    static const std::vector<std::string> names{"gpg", "fgpg", "greedy_oblivious", "greedy_aware", "msvv"};
    return names;
}

inline bool policy_is_randomized(const std::string& name) { return name == "gpg" || name == "fgpg"; }

struct PolicySpec {
    std::string name = "gpg";
    double beta = kDefaultBeta;
    TieBreak tieBreak = TieBreak::LowestId;
};

/// Value of one policy on one seed vector.
inline double run_policy(const Instance& inst, const PolicySpec& p, const SeedVector& Y) {
    const std::string n = normalize_name(p.name);
    if (n == "gpg") return run_gpg(inst, Y, p.beta, p.tieBreak).total;
    if (n == "fgpg") return run_fgpg(inst, Y, p.beta, p.tieBreak).total;
    if (n == "greedy_oblivious") return run_greedy_oblivious(inst, p.tieBreak).total;
    if (n == "greedy_aware") return run_greedy_aware(inst, p.tieBreak).total;
    if (n == "msvv") return run_msvv(inst, p.tieBreak).total;
    throw PreconditionError("unknown policy '" + p.name + "'");
}

namespace detail {

template <class T>
T param(const nlohmann::json& params, const char* key, T fallback) {
    if (!params.is_object() || !params.contains(key)) return fallback;
    try {
        return params.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SchemaError(std::string("params.") + key, "wrong type");
    }
}

} // namespace detail

/// Builds an instance from a generator name and JSON parameters.
inline Instance make_generated(const std::string& generator, const nlohmann::json& params = nlohmann::json::object()) {
    using detail::param;
    const std::string g = normalize_name(generator);
    if (g == "example1") return gen_example1();
    if (g == "example2") return gen_example2(param<std::size_t>(params, "n", 10));
    if (g == "example3") return gen_example3(param<std::size_t>(params, "n", 10));
    if (g == "adversary") {
        const std::size_t n = param<std::size_t>(params, "n", 10);
        const std::string target = normalize_name(param<std::string>(params, "target", "greedy_aware"));
        if (target == "greedy_aware") return gen_adversary(n, GreedyAwarePolicy{}).instance;
        if (target == "greedy_oblivious") return gen_adversary(n, GreedyObliviousPolicy{}).instance;
        if (target == "msvv") return gen_adversary(n, MsvvPolicy{}).instance;
        throw PreconditionError("unknown adversary target '" + target + "'");
    }
    if (g == "decomposable")
        return gen_decomposable(param<std::size_t>(params, "n", 3), param<std::size_t>(params, "T", 60),
                                param<std::uint64_t>(params, "seed", 1), param<double>(params, "gammaMax", 0.01),
                                param<double>(params, "density", 0.7));
    if (g == "smallbid")
        return gen_random_smallbid(param<std::size_t>(params, "n", 4), param<std::size_t>(params, "T", 60),
                                   param<double>(params, "gammaMax", 0.05), param<std::uint64_t>(params, "seed", 1),
                                   param<double>(params, "density", 0.7));
    if (g == "bmatching")
        return gen_bmatching(param<std::size_t>(params, "n", 5), param<std::size_t>(params, "T", 40),
                             param<std::uint64_t>(params, "seed", 1), param<double>(params, "density", 0.4));
    if (g == "triangular")
        return gen_upper_triangular(param<std::size_t>(params, "n", 8), param<std::size_t>(params, "capacity", 1));
    if (g == "pd_failure")
        return gen_pd_failure(param<std::size_t>(params, "others", 5), param<std::size_t>(params, "later", 20),
                              param<double>(params, "budget0", 1000.0), param<double>(params, "bigBid", 10.0));
    if (g == "tiny") return gen_random_tiny(param<std::uint64_t>(params, "seed", 1));
    if (g == "stochastic_rewards") {
        if (!params.contains("prob")) throw SchemaError("params.prob", "missing probability matrix");
        const auto prob = params.at("prob").get<std::vector<std::vector<double>>>();
        const std::size_t n = prob.empty() ? 0 : prob.front().size();
        return gen_stochastic_rewards(prob, n, param<std::uint64_t>(params, "seed", 1));
    }
    throw PreconditionError("unknown generator '" + generator + "'");
}

// ---------------------------------------------------------------------------
// Bundled corpus

struct CorpusEntry {
    std::string name; // file stem
    std::string generator;
    nlohmann::json params;
};

inline const std::vector<CorpusEntry>& bundled_corpus_spec() {
    static const std::vector<CorpusEntry> spec{
        {"adversary_n3", "adversary", {{"n", 3}, {"target", "greedy_aware"}}},
        {"adversary_n10", "adversary", {{"n", 10}, {"target", "greedy_aware"}}},
        {"adversary_n50", "adversary", {{"n", 50}, {"target", "greedy_aware"}}},
        {"example1", "example1", nlohmann::json::object()},
        {"example2_n10", "example2", {{"n", 10}}},
        {"example3_n10", "example3", {{"n", 10}}},
        {"decomposable", "decomposable", {{"n", 3}, {"T", 60}, {"seed", 1}, {"gammaMax", 0.05}}},
        {"bmatching", "bmatching", {{"n", 5}, {"T", 40}, {"seed", 2}}},
        {"smallbid", "smallbid", {{"n", 4}, {"T", 60}, {"gammaMax", 0.05}, {"seed", 3}}},
        {"pd_failure", "pd_failure", {{"others", 5}, {"later", 20}, {"budget0", 1000.0}, {"bigBid", 10.0}}},
    };
    return spec;
}

struct CorpusInstance {
    std::string name;
    Instance instance;
};

inline std::vector<CorpusInstance> bundled_corpus() {
    std::vector<CorpusInstance> out;
    for (const auto& e : bundled_corpus_spec()) out.push_back({e.name, make_generated(e.generator, e.params)});
    return out;
}

inline void write_corpus(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& c : bundled_corpus()) save_instance(c.instance, dir / (c.name + ".json"));
}

/// Loads the corpus files in `dir` in the bundled order.
inline std::vector<CorpusInstance> load_corpus(const std::filesystem::path& dir) {
    std::vector<CorpusInstance> out;
    for (const auto& e : bundled_corpus_spec()) out.push_back({e.name, load_instance(dir / (e.name + ".json"))});
    return out;
}

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentConfig {
    std::optional<std::string> instanceFile;
    std::string generator;
    nlohmann::json params = nlohmann::json::object();
    std::vector<PolicySpec> policies;
    std::size_t trials = 1;
    std::uint64_t rngSeed = 0;
    OfflineKind benchmark = OfflineKind::Lp;
    std::string jsonOut, csvOut;

    void validate() const {
        if (trials < 1) throw SchemaError("trials", "must be >= 1");
        if (!instanceFile && generator.empty()) throw SchemaError("instance", "need a file or a generator");
        if (policies.empty()) throw SchemaError("policies", "at least one policy required");
        const auto& names = registered_policies();
        for (const auto& p : policies) {
            if (std::find(names.begin(), names.end(), normalize_name(p.name)) == names.end())
                throw SchemaError("policies.name", "unknown policy '" + p.name + "'");
            if (!(p.beta > 0.0)) throw SchemaError("policies.beta", "must be positive");
        }
    }
};

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("config", "expected an object");
    ExperimentConfig c;
    try {
        if (j.contains("instance")) {
            const auto& s = j.at("instance");
            if (s.contains("file")) c.instanceFile = s.at("file").get<std::string>();
            if (s.contains("generator")) c.generator = s.at("generator").get<std::string>();
            if (s.contains("params")) c.params = s.at("params");
        }
        if (j.contains("policies"))
            for (const auto& p : j.at("policies")) {
                PolicySpec ps;
                if (p.is_string()) {
                    ps.name = p.get<std::string>();
                } else {
                    ps.name = p.at("name").get<std::string>();
                    if (p.contains("beta")) ps.beta = p.at("beta").get<double>();
                    if (p.contains("tieBreak")) ps.tieBreak = tie_break_from_string(p.at("tieBreak").get<std::string>());
                }
                c.policies.push_back(ps);
            }
        if (j.contains("trials")) {
            const long long t = j.at("trials").get<long long>();
            if (t < 1) throw SchemaError("trials", "must be >= 1");
            c.trials = static_cast<std::size_t>(t);
        }
        if (j.contains("rngSeed")) c.rngSeed = j.at("rngSeed").get<std::uint64_t>();
        if (j.contains("benchmark")) c.benchmark = offline_kind_from_string(j.at("benchmark").get<std::string>());
        if (j.contains("outputs")) {
            const auto& o = j.at("outputs");
            if (o.contains("json")) c.jsonOut = o.at("json").get<std::string>();
            if (o.contains("csv")) c.csvOut = o.at("csv").get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("config", e.what());
    }
    c.validate();
    return c;
}

inline nlohmann::ordered_json to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    auto& s = j["instance"];
    if (c.instanceFile) s["file"] = *c.instanceFile;
    if (!c.generator.empty()) {
        s["generator"] = c.generator;
        s["params"] = c.params;
    }
    auto& ps = j["policies"] = nlohmann::ordered_json::array();
    for (const auto& p : c.policies)
        ps.push_back({{"name", p.name}, {"beta", p.beta}, {"tieBreak", to_string(p.tieBreak)}});
    j["trials"] = c.trials;
    j["rngSeed"] = c.rngSeed;
    j["benchmark"] = to_string(c.benchmark);
    if (!c.jsonOut.empty() || !c.csvOut.empty()) {
        auto& o = j["outputs"];
        if (!c.jsonOut.empty()) o["json"] = c.jsonOut;
        if (!c.csvOut.empty()) o["csv"] = c.csvOut;
    }
    return j;
}

struct PolicyResult {
    PolicySpec policy;
    std::size_t trials = 0;
    double mean = 0.0;
    double se = 0.0;
    double ratio = 0.0;
    double ratioSE = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::vector<std::string> flags;
};

struct RatioReport {
    std::string instance;
    std::size_t resources = 0, arrivals = 0;
    double gamma = 0.0;
    double benchmark = 0.0;
    OfflineKind benchmarkKind = OfflineKind::Lp;
    std::string benchmarkMethod;
    std::size_t trials = 0;
    std::uint64_t rngSeed = 0;
    std::vector<PolicyResult> policies;
};

/// Lower end of the band the GPG estimate must clear at beta = 1.15.
inline double gpg_band_floor(double gamma) { return 0.522 / (1.0 + gamma) - 1e-3; }

inline OfflineResult compute_benchmark(const Instance& inst, OfflineKind kind) {
    switch (kind) {
    case OfflineKind::Lp:
        return lp_benchmark(inst);
    case OfflineKind::Bruteforce:
        return solve_bruteforce(inst);
    case OfflineKind::Analytic: {
        auto a = analytic_opt(inst);
        if (!a) throw PreconditionError("no analytic optimum for instance '" + inst.label() + "'");
        return *a;
    }
    }
    throw PreconditionError("unknown benchmark");
}

inline RatioReport run_experiment(const ExperimentConfig& cfg, const Instance& inst, const OfflineResult& bench) {
    cfg.validate();
    RatioReport rep;
    rep.instance = inst.label();
    rep.resources = inst.num_resources();
    rep.arrivals = inst.num_arrivals();
    rep.gamma = inst.gamma();
    rep.benchmark = bench.value;
    rep.benchmarkKind = bench.kind;
    rep.benchmarkMethod = bench.method;
    rep.trials = cfg.trials;
    rep.rngSeed = cfg.rngSeed;
    const CounterRng rng(cfg.rngSeed);
    const std::size_t n = inst.num_resources();

    for (const auto& p : cfg.policies) {
        const bool randomized = policy_is_randomized(normalize_name(p.name));
        const std::size_t runs = randomized ? cfg.trials : 1;
        std::vector<double> values(runs);
        parallel_for(runs, [&](std::size_t k) { values[k] = run_policy(inst, p, rng.seeds(k, n)); });
        if (!randomized) values.assign(cfg.trials, values.front());

        PolicyResult r;
        r.policy = p;
        r.trials = cfg.trials;
        detail::Moments m;
        r.min = kInf;
        r.max = -kInf;
        for (double v : values) {
            m.add(v);
            r.min = std::min(r.min, v);
            r.max = std::max(r.max, v);
        }
        r.mean = m.mean(cfg.trials);
        r.se = randomized ? m.se(cfg.trials) : 0.0;
        if (bench.value > 0.0) {
            r.ratio = r.mean / bench.value;
            r.ratioSE = r.se / bench.value;
        }
        if (bench.kind == OfflineKind::Lp && r.ratio > 1.0 + 1e-6) r.flags.push_back("exceeds-lp-benchmark");
        if (normalize_name(p.name) == "gpg" && std::abs(p.beta - 1.15) < 1e-12 && bench.value > 0.0 &&
            r.ratio - 3.0 * r.ratioSE < gpg_band_floor(rep.gamma))
            r.flags.push_back("below-3se-band");
        rep.policies.push_back(std::move(r));
    }
    return rep;
}

inline Instance experiment_instance(const ExperimentConfig& cfg) {
    if (cfg.instanceFile) return load_instance(*cfg.instanceFile);
    return make_generated(cfg.generator, cfg.params);
}

inline RatioReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const Instance inst = experiment_instance(cfg);
    return run_experiment(cfg, inst, compute_benchmark(inst, cfg.benchmark));
}

inline nlohmann::ordered_json to_json(const RatioReport& r) {
    nlohmann::ordered_json j;
    j["instance"] = r.instance;
    j["resources"] = r.resources;
    j["arrivals"] = r.arrivals;
    j["gamma"] = r.gamma;
    j["benchmark"] = {{"value", r.benchmark}, {"kind", to_string(r.benchmarkKind)}, {"method", r.benchmarkMethod}};
    j["trials"] = r.trials;
    j["rngSeed"] = r.rngSeed;
    auto& ps = j["policies"] = nlohmann::ordered_json::array();
    for (const auto& p : r.policies) {
        nlohmann::ordered_json e;
        e["name"] = p.policy.name;
        e["beta"] = p.policy.beta;
        e["tieBreak"] = to_string(p.policy.tieBreak);
        e["trials"] = p.trials;
        e["mean"] = p.mean;
        e["se"] = p.se;
        e["ratio"] = p.ratio;
        e["ratioSE"] = p.ratioSE;
        e["min"] = p.min;
        e["max"] = p.max;
        e["flags"] = p.flags;
        ps.push_back(std::move(e));
    }
    return j;
}

enum class ReportFormat { Json, Csv };

inline ReportFormat report_format_from_string(const std::string& s) {
    if (s == "json") return ReportFormat::Json;
    if (s == "csv") return ReportFormat::Csv;
    throw PreconditionError("unknown report format '" + s + "'");
}

inline const char* kRatioCsvHeader =
    "instance,policy,beta,tie_break,trials,mean,se,ratio,ratio_se,min,max,benchmark,benchmark_kind,gamma,flags";

inline void write_report_csv(std::ostream& os, const std::vector<RatioReport>& reports) {
    os << kRatioCsvHeader << '\n';
    char buf[512];
    for (const auto& r : reports)
        for (const auto& p : r.policies) {
            std::string flags;
            for (const auto& f : p.flags) flags += (flags.empty() ? "" : ";") + f;
            os << std::quoted(r.instance) << ',' << p.policy.name << ',';
            std::snprintf(buf, sizeof buf, "%.6f,%s,%zu,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%s,%.12g,",
                          p.policy.beta, to_string(p.policy.tieBreak).c_str(), p.trials, p.mean, p.se, p.ratio,
                          p.ratioSE, p.min, p.max, r.benchmark, to_string(r.benchmarkKind).c_str(), r.gamma);
            os << buf << flags << '\n';
        }
}

inline void emit_report(const std::vector<RatioReport>& reports, ReportFormat fmt, std::ostream& os) {
    if (fmt == ReportFormat::Csv) {
        write_report_csv(os, reports);
        return;
    }
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : reports) j.push_back(to_json(r));
    os << j.dump(2) << '\n';
}

inline void emit_report(const std::vector<RatioReport>& reports, ReportFormat fmt, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    emit_report(reports, fmt, out);
    if (!out) throw Error("I/O failure writing " + path.string());
}

inline void emit_report(const RatioReport& report, ReportFormat fmt, const std::filesystem::path& path) {
    emit_report(std::vector<RatioReport>{report}, fmt, path);
}

// ---------------------------------------------------------------------------
// Verification suite

enum class Scope { Alpha, Lemmas, Augmentation, Decomposable, ClassicPd };

inline const std::vector<std::pair<std::string, Scope>>& scope_names() {
    static const std::vector<std::pair<std::string, Scope>> names{{"alpha", Scope::Alpha},
                                                                  {"lemmas", Scope::Lemmas},
                                                                  {"augmentation", Scope::Augmentation},
                                                                  {"decomposable", Scope::Decomposable},
                                                                  {"classic_pd", Scope::ClassicPd}};
    return names;
}

inline std::set<Scope> parse_scopes(const std::vector<std::string>& items) {
    std::set<Scope> out;
    for (const auto& raw : items) {
        const std::string s = normalize_name(raw);
        if (s == "all") {
            for (const auto& [_, sc] : scope_names()) out.insert(sc);
            continue;
        }
        bool found = false;
        for (const auto& [name, sc] : scope_names())
            if (name == s) {
                out.insert(sc);
                found = true;
            }
        if (!found) throw PreconditionError("unknown scope '" + raw + "'");
    }
    if (out.empty())
        for (const auto& [_, sc] : scope_names()) out.insert(sc);
    return out;
}

struct VerifyOptions {
    std::set<Scope> scopes;         // empty = all
    std::size_t outerSeeds = 20;    // seed vectors per corpus instance
    std::size_t gridPoints = 201;
    std::size_t randomPairs = 200;  // extra small-bid pairs for the coupling check
    std::size_t decomposableInstances = 20;
    std::size_t pdFailureSeeds = 20000;
    std::size_t bmatchingTrials = 500;
    std::uint64_t rngSeed = 20240901;
    double beta = kDefaultBeta;
    bool mutateAugmented = false;   // invert the tie-break of the augmented run
    std::optional<std::filesystem::path> corpusDir;
};

struct Finding {
    std::string scope;
    std::string instance;
    CheckReport report;
};

struct VerificationReport {
    std::vector<Finding> findings;
    std::vector<std::string> notes;

    std::size_t violations() const {
        std::size_t v = 0;
        for (const auto& f : findings) v += f.report.violationCount;
        return v;
    }
    int exit_code() const { return violations() == 0 ? 0 : 1; }
    std::vector<std::string> failing_checks() const {
        std::vector<std::string> out;
        for (const auto& f : findings)
            if (!f.report.ok()) out.push_back(f.scope + "/" + f.report.name + "@" + f.instance);
        return out;
    }
};

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["violations"] = r.violations();
    j["exitCode"] = r.exit_code();
    auto& fs = j["findings"] = nlohmann::ordered_json::array();
    for (const auto& f : r.findings) {
        nlohmann::ordered_json e;
        e["scope"] = f.scope;
        e["instance"] = f.instance;
        e["check"] = to_json(f.report);
        fs.push_back(std::move(e));
    }
    j["notes"] = r.notes;
    return j;
}

/// Focal resources for the lemma sweep: all of them for small n, otherwise the
/// first, last, two interior ones and the largest budget.
inline std::vector<ResourceId> focal_resources(const Instance& inst) {
    const std::size_t n = inst.num_resources();
    std::vector<ResourceId> out;
    if (n <= 10) {
        for (ResourceId i = 0; i < n; ++i) out.push_back(i);
        return out;
    }
    ResourceId big = 0;
    for (ResourceId i = 1; i < n; ++i)
        if (inst.budget(i) > inst.budget(big)) big = i;
    out = {0, n / 3, (2 * n) / 3, n - 1, big};
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Alpha constants and figure data as checks.
inline std::vector<CheckReport> verify_alpha() {
    std::vector<CheckReport> out;
    CheckReport c("alpha-constants");
    auto within = [&](double x, double lo, double hi, const std::string& what) {
        c.require(x, lo, 0.0, Violation{"", 0, 0, 0, 0, 0, what + " lower"});
        c.require(hi, x, 0.0, Violation{"", 0, 0, 0, 0, 0, what + " upper"});
    };
    const auto m1 = minimize_alpha(1.0);
    const auto m2 = minimize_alpha(1.15);
    within(m1.alpha, 0.508, 0.515, "alpha*(1.0)");
    within(m1.x, 0.581, 0.591, "x*(1.0)");
    within(m2.alpha, 0.522, 0.530, "alpha*(1.15)");
    within(m2.x, 0.784, 0.794, "x*(1.15)");
    out.push_back(c);

    CheckReport q("alpha-quadrature-agreement");
    for (double beta : {1.0, 1.15})
        for (int k = 0; k <= 100; ++k) {
            const double v = k / 100.0;
            const double a = alpha_at(v, beta, AlphaMethod::ClosedForm);
            const double b = alpha_at(v, beta, AlphaMethod::Quadrature);
            q.require(1e-6, std::abs(a - b), 0.0, Violation{"", 0, v, beta, 0, 0, ""});
        }
    out.push_back(q);

    CheckReport e("alpha-endpoints");
    const TradeoffFunction g(1.15);
    e.require(1e-9, std::abs(alpha_at(0.0, 1.15) - g.complement(0.0)), 0.0, Violation{"", 0, 0, 0, 0, 0, "x=0"});
    e.require(1e-9, std::abs(alpha_at(1.0, 1.15) - g.complement(0.0) / 1.15), 0.0,
              Violation{"", 0, 1, 0, 0, 0, "x=1"});
    out.push_back(e);
    return out;
}

inline VerificationReport run_verification_suite(const VerifyOptions& opt = {}) {
    const std::set<Scope> scopes = opt.scopes.empty() ? parse_scopes({"all"}) : opt.scopes;
    VerificationReport rep;
    const CounterRng root(opt.rngSeed);

    if (scopes.count(Scope::Alpha))
        for (auto& c : verify_alpha()) rep.findings.push_back({"alpha", "numerics", std::move(c)});

    const bool needCorpus = scopes.count(Scope::Lemmas) || scopes.count(Scope::Augmentation) ||
                            scopes.count(Scope::Decomposable) || scopes.count(Scope::ClassicPd);
    if (!needCorpus) return rep;
    const std::vector<CorpusInstance> corpus = opt.corpusDir ? load_corpus(*opt.corpusDir) : bundled_corpus();
    const TieBreak tb = TieBreak::LowestId;

    if (scopes.count(Scope::Lemmas) || scopes.count(Scope::Decomposable)) {
        struct Task {
            std::size_t inst;
            std::size_t seed;
            ResourceId i;
        };
        std::vector<OfflineResult> opts(corpus.size());
        parallel_for(corpus.size(), [&](std::size_t c) { opts[c] = opt_with_shares(corpus[c].instance); });
        std::vector<Task> tasks;
        std::vector<char> decomp(corpus.size());
        for (std::size_t c = 0; c < corpus.size(); ++c) {
            decomp[c] = is_decomposable(corpus[c].instance);
            for (std::size_t k = 0; k < opt.outerSeeds; ++k)
                for (ResourceId i : focal_resources(corpus[c].instance)) tasks.push_back({c, k, i});
        }
        std::vector<LemmaReport> results(tasks.size());
        parallel_for(tasks.size(), [&](std::size_t k) {
            const Task& t = tasks[k];
            const Instance& inst = corpus[t.inst].instance;
            const SeedVector Y = root.derive(t.inst).seeds(t.seed, inst.num_resources());
            const auto prof = critical_profile(inst, t.i, Y, opts[t.inst].shares_of(t.i), opt.beta, tb);
            LemmaOptions lo;
            lo.lambda = lo.caseBound = lo.alglbl = scopes.count(Scope::Lemmas) > 0;
            lo.decomposable = scopes.count(Scope::Decomposable) && decomp[t.inst];
            if (!lo.lambda && !lo.decomposable) return;
            const auto grid = default_y_grid(prof, opt.gridPoints, lo.decomposable);
            results[k] = run_lemma_checks(inst, prof, Y, grid, lo);
        });
        std::vector<LemmaReport> perInst(corpus.size());
        for (std::size_t k = 0; k < tasks.size(); ++k) perInst[tasks[k].inst].merge(results[k]);
        for (std::size_t c = 0; c < corpus.size(); ++c) {
            if (scopes.count(Scope::Lemmas)) {
                rep.findings.push_back({"lemmas", corpus[c].name, perInst[c].lambda});
                rep.findings.push_back({"lemmas", corpus[c].name, perInst[c].caseBound});
                rep.findings.push_back({"lemmas", corpus[c].name, perInst[c].alglbl});
            }
            if (scopes.count(Scope::Decomposable) && decomp[c])
                rep.findings.push_back({"decomposable", corpus[c].name, perInst[c].decomposable});
        }
    }

    if (scopes.count(Scope::Decomposable)) {
        // Fresh decomposable instances.
        const std::size_t m = opt.decomposableInstances;
        std::vector<CheckReport> res(m, CheckReport("decomposable"));
        parallel_for(m, [&](std::size_t k) {
            const Instance inst = gen_decomposable(3, 40, 1000 + k, 0.05);
            const OfflineResult o = opt_with_shares(inst);
            const SeedVector Y = root.derive(7000 + k).seeds(0, inst.num_resources());
            for (ResourceId i = 0; i < inst.num_resources(); ++i) {
                const auto prof = critical_profile(inst, i, Y, o.shares_of(i), opt.beta, tb);
                res[k].merge(check_decomposable(inst, prof, Y, default_y_grid(prof, opt.gridPoints, true), tb));
            }
        });
        CheckReport all("decomposable");
        for (const auto& r : res) all.merge(r);
        rep.findings.push_back({"decomposable", "random-decomposable", all});

        // b-matching: integral and fractional runs coincide; beta = 1 ratio bound.
        for (const auto& c : corpus) {
            if (c.instance.label().rfind("bmatching", 0) != 0) continue;
            const Instance& inst = c.instance;
            const std::size_t n = inst.num_resources();
            const OfflineResult bench = lp_benchmark(inst);
            CheckReport same("bmatching-trace-identity");
            CheckReport ratio("bmatching-ratio");
            std::vector<double> vals(opt.bmatchingTrials);
            std::vector<char> identical(opt.bmatchingTrials);
            const CounterRng rng = root.derive(9001);
            parallel_for(opt.bmatchingTrials, [&](std::size_t k) {
                const SeedVector Y = rng.seeds(k, n);
                const Allocation a = run_gpg(inst, Y, 1.0, tb);
                const FractionalAllocation f = run_fgpg(inst, Y, 1.0, tb);
                bool ok = std::abs(a.total - f.total) <= 1e-9 * std::max(1.0, a.total);
                for (std::size_t t = 1; ok && t <= inst.num_arrivals(); ++t) {
                    const auto segs = f.segments_of(t);
                    if (!a.matches[t - 1]) {
                        ok = segs.empty();
                    } else {
                        ok = segs.size() == 1 && segs.front().resource == *a.matches[t - 1] &&
                             std::abs(segs.front().consumed - a.paid[t - 1]) <= 1e-9;
                    }
                }
                identical[k] = ok;
                vals[k] = a.total;
            });
            detail::Moments m;
            for (std::size_t k = 0; k < opt.bmatchingTrials; ++k) {
                same.require(identical[k] ? 1.0 : 0.0, 1.0, 0.0, Violation{"", 0, 0, static_cast<double>(k), 0, 0, "seed"});
                m.add(vals[k]);
            }
            const double mean = m.mean(opt.bmatchingTrials) / bench.value;
            const double se = m.se(opt.bmatchingTrials) / bench.value;
            ratio.require(mean, 1.0 - std::exp(-1.0) - 3.0 * se, 0.0, Violation{"", 0, 1.0, 0, 0, 0, "beta=1"});
            rep.findings.push_back({"decomposable", c.name, same});
            rep.findings.push_back({"decomposable", c.name, ratio});
        }
    }

    if (scopes.count(Scope::Augmentation)) {
        const std::optional<TieBreak> augTb =
            opt.mutateAugmented ? std::optional<TieBreak>(TieBreak::HighestId) : std::nullopt;
        // Random seeds plus one all-equal seed vector, where tie-breaking decides.
        for (std::size_t c = 0; c < corpus.size(); ++c) {
            const Instance& inst = corpus[c].instance;
            const std::size_t n = inst.num_resources();
            std::vector<AugmentationReport> res(opt.outerSeeds + 1);
            parallel_for(res.size(), [&](std::size_t k) {
                const SeedVector Y =
                    k < opt.outerSeeds ? root.derive(100 + c).seeds(k, n) : SeedVector::constant(n, 0.5);
                res[k] = check_augmentation(inst, Y, opt.beta, tb, augTb);
            });
            AugmentationReport all;
            for (const auto& r : res) all.merge(r);
            rep.findings.push_back({"augmentation", corpus[c].name, all.perResource});
            rep.findings.push_back({"augmentation", corpus[c].name, all.total});
            rep.findings.push_back({"augmentation", corpus[c].name, all.zDominance});
        }
        std::vector<AugmentationReport> res(opt.randomPairs);
        parallel_for(opt.randomPairs, [&](std::size_t k) {
            const Instance inst = gen_random_smallbid(3 + k % 4, 20 + k % 30, 0.1, 500 + k);
            res[k] = check_augmentation(inst, root.derive(300).seeds(k, inst.num_resources()), opt.beta, tb, augTb);
        });
        AugmentationReport all;
        for (const auto& r : res) all.merge(r);
        rep.findings.push_back({"augmentation", "random-smallbid", all.perResource});
        rep.findings.push_back({"augmentation", "random-smallbid", all.total});
        rep.findings.push_back({"augmentation", "random-smallbid", all.zDominance});
    }

    if (scopes.count(Scope::ClassicPd)) {
        for (std::size_t c = 0; c < corpus.size(); ++c) {
            const Instance& inst = corpus[c].instance;
            CheckReport cond("classic-pd-condition-ii");
            std::vector<ClassicPdCandidate> res(opt.outerSeeds);
            parallel_for(res.size(), [&](std::size_t k) {
                res[k] = classic_pd_candidate(inst, root.derive(200 + c).seeds(k, inst.num_resources()), opt.beta);
            });
            for (std::size_t k = 0; k < res.size(); ++k)
                cond.require(res[k].conditionRhs, res[k].conditionLhs, kCheckTol * std::max(1.0, res[k].conditionRhs),
                             Violation{"", 0, 0, static_cast<double>(k), 0, 0, "seed"});
            rep.findings.push_back({"classic_pd", corpus[c].name, cond});
        }
        const Instance fail = gen_pd_failure();
        const auto est = classic_pd_expectation(fail, 1.0, opt.pdFailureSeeds, opt.rngSeed, 0.5);
        std::ostringstream note;
        note << std::setprecision(6) << "classic primal-dual obstruction: E[lambda_" << est.minArrival
             << "] + b theta_" << est.minResource << " = " << est.minEdgeValue << " +- " << est.minSlackSE
             << " (1/e = " << std::exp(-1.0) << "), slack at alpha=0.5: " << est.minSlackI;
        rep.notes.push_back(note.str());
    }
    return rep;
}

} // namespace adwords
