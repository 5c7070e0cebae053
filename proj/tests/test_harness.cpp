#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "adwords/adwords.hpp"

using namespace adwords;

namespace {

ExperimentConfig adversary_config(std::vector<std::string> policies, std::size_t trials = 1) {
    ExperimentConfig c;
    c.generator = "adversary";
    c.params = {{"n", 50}, {"target", "greedy-aware"}};
    for (auto& p : policies) c.policies.push_back(PolicySpec{p});
    c.trials = trials;
    c.rngSeed = 11;
    return c;
}

VerifyOptions light(std::vector<std::string> scopes) {
    VerifyOptions o;
    o.scopes = parse_scopes(scopes);
    o.outerSeeds = 2;
    o.gridPoints = 21;
    o.randomPairs = 20;
    o.decomposableInstances = 2;
    o.pdFailureSeeds = 500;
    o.bmatchingTrials = 50;
    return o;
}

struct ThreadsEnv {
    explicit ThreadsEnv(const char* v) { setenv("ADWORDS_LAB_THREADS", v, 1); }
    ~ThreadsEnv() { unsetenv("ADWORDS_LAB_THREADS"); }
};

} // namespace

TEST(Pool, CoversEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t k) { hits[k]++; }, 8);
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(parallel_for(100, [](std::size_t k) { if (k == 50) throw Error("boom"); }, 4), Error);
    parallel_for(0, [](std::size_t) { FAIL(); }, 4);
}

TEST(Pool, EnvironmentCap) {
    ThreadsEnv env("1");
    EXPECT_EQ(worker_count(), 1u);
}

TEST(Registry, NamesAndGenerators) {
    EXPECT_EQ(normalize_name("Greedy-Aware"), "greedy_aware");
    EXPECT_TRUE(policy_is_randomized("gpg"));
    EXPECT_FALSE(policy_is_randomized("msvv"));
    EXPECT_THROW(make_generated("nope"), PreconditionError);
    EXPECT_THROW(make_generated("adversary", {{"n", 3}, {"target", "oracle"}}), PreconditionError);
    EXPECT_THROW(make_generated("smallbid", {{"n", "four"}}), SchemaError);
    EXPECT_EQ(make_generated("example3", {{"n", 4}}).num_arrivals(), 8u);
    EXPECT_EQ(make_generated("tiny", {{"seed", 3}}).label(), gen_random_tiny(3).label());
    EXPECT_THROW(run_policy(gen_example1(), PolicySpec{"oracle"}, SeedVector::constant(3, 0.5)), PreconditionError);
}

TEST(Experiment, AdversaryRatio) {
    const auto rep = run_experiment(adversary_config({"greedy_aware"}));
    ASSERT_EQ(rep.policies.size(), 1u);
    EXPECT_DOUBLE_EQ(rep.benchmark, 2499.0);
    EXPECT_EQ(rep.benchmarkMethod, "analytic-tight");
    EXPECT_NEAR(rep.policies[0].ratio, 52.0 / 102.0, 1e-12);
    EXPECT_EQ(rep.policies[0].se, 0.0);
    EXPECT_TRUE(rep.policies[0].flags.empty());
}

TEST(Experiment, ConfigErrors) {
    auto c = adversary_config({"gpg"});
    c.trials = 0;
    EXPECT_THROW(run_experiment(c), SchemaError);
    EXPECT_THROW(run_experiment(adversary_config({"oracle"})), SchemaError);
    ExperimentConfig none;
    none.policies.push_back(PolicySpec{});
    EXPECT_THROW(none.validate(), SchemaError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"instance":{"generator":"example1"},"policies":["gpg"],"trials":0})")),
                 SchemaError);
    EXPECT_THROW(config_from_json(nlohmann::json::array()), SchemaError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"instance":{"generator":"example1"},"policies":[]})")),
                 SchemaError);
}

TEST(Experiment, ConfigJsonRoundTrip) {
    const auto j = nlohmann::json::parse(R"({
        "instance": {"generator": "smallbid", "params": {"n": 3, "T": 10, "seed": 2}},
        "policies": ["gpg", {"name": "fgpg", "beta": 1.0, "tieBreak": "highest-id"}, "msvv"],
        "trials": 25, "rngSeed": 9, "benchmark": "lp",
        "outputs": {"json": "r.json", "csv": "r.csv"}
    })");
    const auto c = config_from_json(j);
    EXPECT_EQ(c.policies.size(), 3u);
    EXPECT_EQ(c.policies[1].tieBreak, TieBreak::HighestId);
    EXPECT_DOUBLE_EQ(c.policies[1].beta, 1.0);
    EXPECT_EQ(c.trials, 25u);
    const auto again = config_from_json(nlohmann::json::parse(to_json(c).dump()));
    EXPECT_EQ(to_json(again).dump(), to_json(c).dump());
}

TEST(Experiment, ReportsAreByteIdentical) {
    const auto cfg = adversary_config({"gpg", "fgpg", "greedy_aware", "msvv"}, 40);
    std::ostringstream a, b;
    emit_report({run_experiment(cfg)}, ReportFormat::Json, a);
    emit_report({run_experiment(cfg)}, ReportFormat::Json, b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Experiment, IndependentOfThreadCount) {
    auto cfg = adversary_config({"gpg", "fgpg"}, 64);
    cfg.generator = "smallbid";
    cfg.params = {{"n", 4}, {"T", 30}, {"seed", 5}};
    std::string one, many;
    {
        ThreadsEnv env("1");
        one = to_json(run_experiment(cfg)).dump();
    }
    {
        ThreadsEnv env("6");
        many = to_json(run_experiment(cfg)).dump();
    }
    EXPECT_EQ(one, many);
}

TEST(Experiment, MeanMatchesDirectLoop) {
    auto cfg = adversary_config({"gpg"}, 30);
    cfg.generator = "example3";
    cfg.params = {{"n", 6}};
    const Instance inst = experiment_instance(cfg);
    const auto rep = run_experiment(cfg);
    const CounterRng rng(cfg.rngSeed);
    double s = 0.0;
    for (std::size_t k = 0; k < 30; ++k) s += run_gpg(inst, rng.seeds(k, 3), kDefaultBeta).total;
    EXPECT_NEAR(rep.policies[0].mean, s / 30.0, 1e-12);
    EXPECT_LE(rep.policies[0].ratio, 1.0 + 1e-9);
    EXPECT_GE(rep.policies[0].max, rep.policies[0].mean);
}

TEST(Experiment, ExceedsLpFlag) {
    // A fake benchmark below what greedy achieves must be flagged.
    const Instance inst = gen_example1();
    OfflineResult fake;
    fake.kind = OfflineKind::Lp;
    fake.value = 1.0;
    ExperimentConfig cfg;
    cfg.generator = "example1";
    cfg.policies = {PolicySpec{"greedy_aware"}};
    const auto rep = run_experiment(cfg, inst, fake);
    ASSERT_EQ(rep.policies[0].flags.size(), 1u);
    EXPECT_EQ(rep.policies[0].flags[0], "exceeds-lp-benchmark");
}

TEST(Experiment, BandFlagOnOverestimatedBenchmark) {
    const Instance inst = gen_example1();
    OfflineResult loose;
    loose.kind = OfflineKind::Analytic;
    loose.value = 1000.0;
    ExperimentConfig cfg;
    cfg.generator = "example1";
    cfg.policies = {PolicySpec{"gpg"}};
    cfg.trials = 10;
    const auto rep = run_experiment(cfg, inst, loose);
    ASSERT_EQ(rep.policies[0].flags.size(), 1u);
    EXPECT_EQ(rep.policies[0].flags[0], "below-3se-band");
}

TEST(Reports, CsvRows) {
    const auto rep = run_experiment(adversary_config({"gpg", "greedy_aware", "msvv"}, 5));
    std::ostringstream os;
    emit_report({rep, rep}, ReportFormat::Csv, os);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, kRatioCsvHeader);
    std::size_t rows = 0;
    const auto header_cols = std::count(line.begin(), line.end(), ',');
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), header_cols) << line;
    }
    EXPECT_EQ(rows, 6u);
}

TEST(Reports, JsonShapeAndFile) {
    const auto rep = run_experiment(adversary_config({"greedy_aware"}));
    const auto path = std::filesystem::temp_directory_path() / "adwords_report_test.json";
    emit_report(rep, ReportFormat::Json, path);
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    ASSERT_TRUE(j.is_array());
    EXPECT_DOUBLE_EQ(j[0]["benchmark"]["value"].get<double>(), 2499.0);
    EXPECT_EQ(j[0]["policies"][0]["name"], "greedy_aware");
    std::filesystem::remove(path);
    EXPECT_EQ(report_format_from_string("csv"), ReportFormat::Csv);
    EXPECT_THROW(report_format_from_string("xml"), PreconditionError);
}

TEST(Corpus, FilesMatchGenerators) {
    const auto files = load_corpus(ADWORDS_CORPUS_DIR);
    const auto generated = bundled_corpus();
    ASSERT_EQ(files.size(), generated.size());
    for (std::size_t k = 0; k < files.size(); ++k) {
        EXPECT_EQ(files[k].name, generated[k].name);
        EXPECT_EQ(dump_instance(files[k].instance), dump_instance(generated[k].instance)) << files[k].name;
    }
}

TEST(Corpus, WriteAndLoad) {
    const auto dir = std::filesystem::temp_directory_path() / "adwords_corpus_test";
    std::filesystem::remove_all(dir);
    write_corpus(dir);
    const auto back = load_corpus(dir);
    EXPECT_EQ(back.size(), bundled_corpus_spec().size());
    std::filesystem::remove_all(dir);
    EXPECT_THROW(load_corpus(dir), Error);
}

TEST(Focal, Resources) {
    EXPECT_EQ(focal_resources(gen_example1()).size(), 3u);
    const auto f = focal_resources(gen_adversary(50, GreedyAwarePolicy{}).instance);
    EXPECT_LE(f.size(), 5u);
    EXPECT_EQ(f.front(), 0u);
    EXPECT_EQ(f.back(), 49u);
}

TEST(Scopes, Parsing) {
    EXPECT_EQ(parse_scopes({"all"}).size(), scope_names().size());
    EXPECT_EQ(parse_scopes({}).size(), scope_names().size());
    EXPECT_EQ(parse_scopes({"alpha"}), std::set<Scope>{Scope::Alpha});
    EXPECT_EQ(parse_scopes({"classic-pd", "lemmas"}).size(), 2u);
    EXPECT_THROW(parse_scopes({"everything"}), PreconditionError);
}

TEST(Verify, AlphaScopeOnlyRunsNumerics) {
    const auto rep = run_verification_suite(light({"alpha"}));
    ASSERT_FALSE(rep.findings.empty());
    for (const auto& f : rep.findings) EXPECT_EQ(f.scope, "alpha");
    EXPECT_EQ(rep.exit_code(), 0);
}

TEST(Verify, LightFullSuitePasses) {
    const auto rep = run_verification_suite(light({"all"}));
    EXPECT_EQ(rep.violations(), 0u);
    for (const auto& s : rep.failing_checks()) ADD_FAILURE() << s;
    std::set<std::string> seen;
    for (const auto& f : rep.findings) seen.insert(f.scope);
    EXPECT_EQ(seen, (std::set<std::string>{"alpha", "lemmas", "augmentation", "decomposable", "classic_pd"}));
    EXPECT_EQ(rep.notes.size(), 1u);
    EXPECT_EQ(to_json(rep)["exitCode"], 0);
}

TEST(Verify, MutationIsDetected) {
    auto o = light({"augmentation"});
    o.mutateAugmented = true;
    const auto rep = run_verification_suite(o);
    EXPECT_EQ(rep.exit_code(), 1);
    const auto failing = rep.failing_checks();
    ASSERT_FALSE(failing.empty());
    bool named = false;
    for (const auto& s : failing) named |= s.find("z-dominance") != std::string::npos;
    EXPECT_TRUE(named);
}

TEST(Verify, CorpusDirectoryRoute) {
    auto o = light({"classic_pd"});
    o.corpusDir = ADWORDS_CORPUS_DIR;
    const auto rep = run_verification_suite(o);
    EXPECT_EQ(rep.exit_code(), 0);
    EXPECT_EQ(rep.findings.size(), bundled_corpus_spec().size());
}
