#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "adwords/adwords.hpp"

using namespace adwords;

namespace {

Instance make(std::vector<double> budgets, std::vector<std::vector<double>> bids, std::vector<double> rewards = {}) {
    std::vector<Arrival> arr;
    for (auto& b : bids) arr.push_back(Arrival{std::move(b)});
    return Instance("test", detail::make_resources(budgets, rewards), std::move(arr));
}

LemmaReport lemmas_for(const Instance& inst, const SeedVector& Y, std::size_t gridN, bool decomposable = false) {
    const auto opt = opt_with_shares(inst);
    LemmaReport all;
    LemmaOptions o;
    o.decomposable = decomposable;
    for (ResourceId i = 0; i < inst.num_resources(); ++i) {
        const auto prof = critical_profile(inst, i, Y, opt.shares, kDefaultBeta);
        all.merge(run_lemma_checks(inst, prof, Y, default_y_grid(prof, gridN), o));
    }
    return all;
}

std::string describe(const CheckReport& r) {
    std::ostringstream os;
    os << r.name << ": " << r.violationCount << " of " << r.evaluated;
    if (!r.violations.empty()) {
        const auto& v = r.violations.front();
        os << " first at i=" << v.resource << " y=" << v.y << " tau=" << v.tau << " lhs=" << v.lhs
           << " rhs=" << v.rhs << " " << v.detail;
    }
    return os.str();
}

} // namespace

TEST(Threshold, ClosedFormCases) {
    const TradeoffFunction g(1.15);
    EXPECT_NEAR(critical_threshold(2.0, 2.0 * g.complement(0.5), 1.15), 0.5, 1e-14);
    EXPECT_EQ(critical_threshold(2.0, 0.0, 1.15), 1.0);
    EXPECT_EQ(critical_threshold(2.0, 2.0, 1.15), 0.0);
    EXPECT_EQ(critical_threshold(2.0, 3.0, 1.15), 0.0);
    // Competitor below the price at y = 0 but above b r (1 - g(0)) clamps to 0.
    EXPECT_EQ(critical_threshold(1.0, 0.9, 1.15), 0.0);
    for (double y : {0.1, 0.4, 0.77, 0.99}) EXPECT_NEAR(critical_threshold(3.0, 3.0 * g.complement(y), 1.15), y, 1e-12);
}

TEST(Profile, MassAndMonotonicity) {
    for (const Instance& inst : {gen_example3(6), gen_example1(), gen_random_smallbid(3, 8, 0.5, 11)}) {
        const auto opt = opt_with_shares(inst);
        const CounterRng rng(5);
        const SeedVector Y = rng.seeds(0, inst.num_resources());
        for (ResourceId i = 0; i < inst.num_resources(); ++i) {
            const auto p = critical_profile(inst, i, Y, opt.shares, kDefaultBeta);
            EXPECT_EQ(p.seeds[i], 1.0);
            EXPECT_NEAR(p.sum_b(), p.optI, 1e-12 * std::max(1.0, p.optI));
            EXPECT_NEAR(p.B(0.0), p.optI, 1e-12 * std::max(1.0, p.optI));
            double prev = kInf;
            for (int k = 0; k <= 100; ++k) {
                const double y = k / 100.0;
                const double B = p.B(y);
                EXPECT_LE(B, prev + 1e-15);
                EXPECT_NEAR(p.S_measure(y), B, 1e-12);
                prev = B;
            }
            for (std::size_t k = 1; k < p.V.size(); ++k) EXPECT_LT(p.V[k - 1], p.V[k]);
            for (const auto& pc : p.pieces) {
                EXPECT_GE(pc.threshold, 0.0);
                EXPECT_LE(pc.threshold, 1.0);
                EXPECT_NEAR(detail::price_in(p.base, pc.arrival, 0.5 * (pc.tau1 + pc.tau2)), pc.competitor, 1e-12);
            }
        }
    }
}

TEST(Profile, ToyThresholds) {
    // Resource 1 alone bids on arrival 1, so OPT_0's moment on it faces no competitor.
    const Instance inst = make({1.0, 1.0}, {{1.0, 0.0}});
    const std::vector<OptShare> shares{{0, 1, 1.0}};
    const auto p = critical_profile(inst, 0, SeedVector::constant(2, 0.3), shares, 1.15);
    ASSERT_EQ(p.pieces.size(), 1u);
    // With y_0 = 1 the price of resource 0 is 0, so nobody matches: threshold 1.
    EXPECT_EQ(p.pieces[0].threshold, 1.0);

    // Competitor at price 0.5 * 2 (1 - g(0.5)) against bid 2: threshold 0.5.
    const TradeoffFunction g(1.15);
    const double y1 = 1.0 + std::log(1.0 - 2.0 * g.complement(0.5) / 2.0) / 1.15; // price of resource 1 with bid 2
    const Instance two = make({5.0, 5.0}, {{2.0, 2.0}});
    const auto q = critical_profile(two, 0, SeedVector(std::vector<double>{0.0, y1}), {{0, 1, 1.0}}, 1.15);
    ASSERT_EQ(q.pieces.size(), 1u);
    EXPECT_NEAR(q.pieces[0].threshold, 0.5, 1e-12);
    EXPECT_EQ(q.pieces[0].competitorId, std::optional<ResourceId>{1});
}

TEST(Lemmas, ZeroViolationsOnExample3) {
    const Instance inst = gen_example3(10);
    const CounterRng rng(17);
    for (std::uint64_t k = 0; k < 5; ++k) {
        const auto rep = lemmas_for(inst, rng.seeds(k, 3), 51);
        EXPECT_TRUE(rep.lambda.ok()) << describe(rep.lambda);
        EXPECT_TRUE(rep.caseBound.ok()) << describe(rep.caseBound);
        EXPECT_TRUE(rep.alglbl.ok()) << describe(rep.alglbl);
        EXPECT_GT(rep.lambda.evaluated, 0u);
        EXPECT_GT(rep.caseBound.evaluated, 0u);
    }
}

TEST(Lemmas, ZeroViolationsOnRandomSweeps) {
    const CounterRng rng(99);
    for (std::uint64_t s = 0; s < 30; ++s) {
        const Instance inst = s % 3 == 0 ? gen_bmatching(3, 8, s, 0.6)
                              : s % 3 == 1 ? gen_random_smallbid(3, 10, 0.4, s)
                                           : gen_random_tiny(s);
        const auto rep = lemmas_for(inst, rng.seeds(s, inst.num_resources()), 41);
        EXPECT_TRUE(rep.ok()) << inst.label() << " " << describe(rep.lambda) << " | " << describe(rep.caseBound)
                              << " | " << describe(rep.alglbl);
    }
}

TEST(Lemmas, WrappersMatchCombinedRun) {
    const Instance inst = gen_example1();
    const auto opt = opt_with_shares(inst);
    const SeedVector Y = SeedVector(std::vector<double>{0.2, 0.6, 0.4});
    const auto prof = critical_profile(inst, 1, Y, opt.shares, kDefaultBeta);
    const auto grid = default_y_grid(prof, 21);
    const auto all = run_lemma_checks(inst, prof, Y, grid);
    EXPECT_EQ(check_lambda_monotone(inst, prof, Y, grid).evaluated, all.lambda.evaluated);
    EXPECT_EQ(check_case_bound(inst, prof, Y, grid).evaluated, all.caseBound.evaluated);
    EXPECT_EQ(check_alglbl(inst, prof, Y, grid).evaluated, all.alglbl.evaluated);
    EXPECT_EQ(check_case_bound(inst, prof, Y, grid).name, "case-bound");
}

TEST(Lemmas, AveragedCaseBoundMeetsConstant) {
    // Integrating lambda over OPT_i plus theta_i over y_i ~ U[0,1] must reach alpha* r_i OPT_i.
    const double astar = minimize_alpha(kDefaultBeta).alpha;
    const TradeoffFunction g(kDefaultBeta);
    for (const Instance& inst : {gen_example3(8), gen_random_smallbid(3, 12, 0.3, 4), gen_bmatching(3, 9, 8, 0.5)}) {
        const auto opt = opt_with_shares(inst);
        const SeedVector Y = CounterRng(3).seeds(1, inst.num_resources());
        for (ResourceId i = 0; i < inst.num_resources(); ++i) {
            const auto prof = critical_profile(inst, i, Y, opt.shares, kDefaultBeta);
            if (!(prof.optI > 0.0)) continue;
            const int N = 400;
            double avg = 0.0;
            for (int k = 0; k < N; ++k) {
                const double y = (k + 0.5) / N;
                const auto f = run_fgpg(inst, Y.with(i, y), kDefaultBeta);
                double q = f.consumed[i] * inst.reward(i) * g(y);
                for (const auto& pc : prof.pieces) q += detail::lambda_integral(f, pc.arrival, pc.tau1, pc.tau2);
                avg += q / N;
            }
            EXPECT_GE(avg, astar * inst.reward(i) * prof.optI - 1e-3 * prof.optI) << inst.label() << " i=" << i;
        }
    }
}

TEST(Lemmas, DecomposableCheck) {
    const Instance bad = make({1.0, 1.0}, {{1.0, 2.0}, {2.0, 1.0}});
    const auto opt = opt_with_shares(bad);
    const auto prof = critical_profile(bad, 0, SeedVector::constant(2, 0.5), opt.shares, kDefaultBeta);
    EXPECT_THROW(check_decomposable(bad, prof, SeedVector::constant(2, 0.5), {0.5}), PreconditionError);

    const CounterRng rng(123);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Instance inst = gen_decomposable(3, 12, 400 + s, 0.3);
        ASSERT_TRUE(is_decomposable(inst));
        const auto rep = lemmas_for(inst, rng.seeds(s, 3), 41, true);
        EXPECT_TRUE(rep.decomposable.ok()) << describe(rep.decomposable);
        EXPECT_GT(rep.decomposable.evaluated, 0u);
    }
}

TEST(Lemmas, BudgetClaimProbeIsReportOnly) {
    const Instance inst = gen_example3(6);
    const auto opt = opt_with_shares(inst);
    const SeedVector Y = SeedVector::constant(3, 0.4);
    const auto prof = critical_profile(inst, 2, Y, opt.shares, kDefaultBeta);
    const auto rep = probe_budget_claim(inst, prof, Y, default_y_grid(prof, 21));
    EXPECT_EQ(rep.name, "budget-claim-probe");
    EXPECT_GT(rep.evaluated, 0u);
}

TEST(Certificate, IdentityAndSigns) {
    for (const Instance& inst : {gen_example3(6), gen_random_smallbid(4, 15, 0.2, 3)}) {
        const auto opt = opt_with_shares(inst);
        const auto c = build_certificate(inst, opt, kDefaultBeta, 300, 42);
        EXPECT_LE(c.maxIdentityResidual, 1e-9 * std::max(1.0, c.falg));
        EXPECT_GE(c.minLambda, 0.0);
        EXPECT_GE(c.minTheta, 0.0);
        double dual = 0.0;
        for (double l : c.lambdaPerArrival) dual += l;
        for (double t : c.theta) dual += t;
        EXPECT_NEAR(dual, c.falg, 1e-9 * std::max(1.0, c.falg));
        const double astar = minimize_alpha(kDefaultBeta).alpha;
        for (ResourceId i = 0; i < inst.num_resources(); ++i)
            EXPECT_GE(c.slack(i, astar), -4.0 * c.coverageSE[i] - 1e-9) << inst.label() << " i=" << i;
        EXPECT_FALSE(c.optSource.empty());
    }
    EXPECT_THROW(build_certificate(gen_example1(), opt_with_shares(gen_example1()), 1.15, 0, 1), PreconditionError);
}

TEST(Certificate, DeterministicAndSerializable) {
    const Instance inst = gen_example1();
    const auto opt = opt_with_shares(inst);
    const auto a = build_certificate(inst, opt, 1.15, 50, 7);
    const auto b = build_certificate(inst, opt, 1.15, 50, 7);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    std::ostringstream os;
    write_certificate_csv_header(os);
    write_certificate_csv_row(os, "example1", a);
    const std::string s = os.str();
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 2);
}

TEST(Augmentation, RandomSmallBidPairs) {
    const CounterRng rng(2024);
    for (std::uint64_t s = 0; s < 60; ++s) {
        const Instance inst = gen_random_smallbid(3 + s % 3, 20, 0.1, 7000 + s);
        const auto rep = check_augmentation(inst, rng.seeds(s, inst.num_resources()), kDefaultBeta);
        EXPECT_TRUE(rep.ok()) << describe(rep.perResource) << " | " << describe(rep.total) << " | "
                              << describe(rep.zDominance);
        EXPECT_GE(rep.alg, rep.falgAug / (1.0 + rep.gamma) - 1e-9 * std::max(1.0, rep.falgAug));
    }
}

TEST(Augmentation, AugmentedBudgets) {
    const Instance inst = make({3.0, 1.0}, {{1.0, 0.5}, {2.0, 0.25}});
    const Instance aug = augment_budgets(inst);
    EXPECT_DOUBLE_EQ(aug.budget(0), 5.0);
    EXPECT_DOUBLE_EQ(aug.budget(1), 1.5);
}

TEST(Augmentation, MismatchedTieBreakIsCaught) {
    // Equal seeds make arrival 1 a tie; breaking it differently on the two runs
    // sends it to different resources and breaks z-dominance.
    const Instance inst = make({1.0, 1.0}, {{1.0, 1.0}, {1.0, 0.0}});
    const SeedVector Y = SeedVector::constant(2, 0.5);
    EXPECT_TRUE(check_augmentation(inst, Y, kDefaultBeta).ok());
    const auto bad = check_augmentation(inst, Y, kDefaultBeta, TieBreak::LowestId, TieBreak::HighestId);
    EXPECT_FALSE(bad.zDominance.ok());
    EXPECT_FALSE(bad.ok());
}

TEST(ClassicPd, ConditionTwoHolds) {
    const CounterRng rng(8);
    for (const auto& entry : bundled_corpus())
        for (std::uint64_t k = 0; k < 5; ++k) {
            const auto c = classic_pd_candidate(entry.instance, rng.seeds(k, entry.instance.num_resources()), 1.0);
            EXPECT_TRUE(c.conditionII) << entry.name << " " << c.conditionLhs << " > " << c.conditionRhs;
        }
}

TEST(ClassicPd, SingleEdgeTight) {
    const Instance inst = make({1.0}, {{1.0}});
    for (double y : {0.0, 0.3, 0.9}) {
        const auto c = classic_pd_candidate(inst, SeedVector::constant(1, y), 1.0, 1.0);
        EXPECT_NEAR(c.minSlackI, 0.0, 1e-12);
        EXPECT_NEAR(c.conditionLhs, c.alg, 1e-12);
    }
}

TEST(ClassicPd, FailureInstanceObstruction) {
    const Instance inst = gen_pd_failure();
    const auto e = classic_pd_expectation(inst, 1.0, 5000, 31);
    EXPECT_EQ(e.conditionFailures, 0u);
    EXPECT_LT(e.minSlackI, 0.0);
    EXPECT_EQ(e.minResource, 0u);
    EXPECT_EQ(e.minArrival, 1u);
    // E[1 - g(y)] = 1/e at beta = 1; theta_0 contributes only O(1/B_0).
    EXPECT_NEAR(e.minEdgeValue, 1.0 / std::exp(1.0), 4.0 * e.minSlackSE + 0.003);
    EXPECT_THROW(classic_pd_expectation(inst, 1.0, 0, 1), PreconditionError);
}
