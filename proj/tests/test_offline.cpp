#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "adwords/adwords.hpp"

using namespace adwords;

namespace {

Instance make(std::vector<double> budgets, std::vector<std::vector<double>> bids, std::vector<double> rewards = {}) {
    std::vector<Arrival> arr;
    for (auto& b : bids) arr.push_back(Arrival{std::move(b)});
    return Instance("test", detail::make_resources(budgets, rewards), std::move(arr));
}

/// Dual feasibility, strong duality and complementary slackness of an LP result.
void expect_optimal_duals(const Instance& inst, const OfflineResult& r, double tol = 1e-7) {
    const std::size_t n = inst.num_resources(), T = inst.num_arrivals();
    ASSERT_EQ(r.theta.size(), n);
    ASSERT_EQ(r.lambda.size(), T);
    double dual = 0.0;
    for (ResourceId i = 0; i < n; ++i) {
        EXPECT_GE(r.theta[i], -tol);
        dual += inst.budget(i) * r.theta[i];
    }
    for (double l : r.lambda) {
        EXPECT_GE(l, -tol);
        dual += l;
    }
    EXPECT_NEAR(dual, r.value, tol * std::max(1.0, r.value));
    const LpProblem lp = build_lp(inst);
    for (std::size_t t = 1; t <= T; ++t) {
        double rowUse = 0.0;
        for (ResourceId i = 0; i < n; ++i) {
            const double b = inst.bid(i, t);
            const double reduced = r.lambda[t - 1] + b * r.theta[i] - inst.reward(i) * b;
            EXPECT_GE(reduced, -tol) << i << "," << t;
            const double x = r.x[lp.var(i, t)];
            if (x > tol) { EXPECT_NEAR(reduced, 0.0, 1e-6) << i << "," << t; }
            rowUse += x;
        }
        if (r.lambda[t - 1] > tol) { EXPECT_NEAR(rowUse, 1.0, 1e-6); }
    }
    for (ResourceId i = 0; i < n; ++i)
        if (r.theta[i] > tol) { EXPECT_NEAR(r.perResource[i], inst.budget(i), 1e-6 * std::max(1.0, inst.budget(i))); }
}

Instance permuted(const Instance& inst, const std::vector<std::size_t>& rp, const std::vector<std::size_t>& tp) {
    std::vector<Resource> res;
    for (std::size_t k = 0; k < rp.size(); ++k) res.push_back(Resource{k, inst.budget(rp[k]), inst.reward(rp[k])});
    std::vector<Arrival> arr;
    for (std::size_t t : tp) {
        Arrival a;
        for (std::size_t k = 0; k < rp.size(); ++k) a.bids.push_back(inst.bid(rp[k], t + 1));
        arr.push_back(a);
    }
    return Instance("permuted", res, arr);
}

} // namespace

TEST(Simplex, TextbookProblem) {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18.
    DenseSimplex s(3, 2);
    s.set_objective(0, 3);
    s.set_objective(1, 5);
    s.set_coef(0, 0, 1);
    s.set_coef(1, 1, 2);
    s.set_coef(2, 0, 3);
    s.set_coef(2, 1, 2);
    s.set_rhs(0, 4);
    s.set_rhs(1, 12);
    s.set_rhs(2, 18);
    const auto r = s.solve();
    EXPECT_NEAR(r.value, 36.0, 1e-12);
    EXPECT_NEAR(r.x[0], 2.0, 1e-12);
    EXPECT_NEAR(r.x[1], 6.0, 1e-12);
    EXPECT_NEAR(r.duals[0], 0.0, 1e-12);
    EXPECT_NEAR(r.duals[1], 1.5, 1e-12);
    EXPECT_NEAR(r.duals[2], 1.0, 1e-12);
}

TEST(Simplex, DegenerateCyclingExample) {
    // Beale's example cycles under the largest-coefficient rule; Bland's rule terminates.
    DenseSimplex s(3, 4);
    const double c[] = {0.75, -150.0, 0.02, -6.0};
    const double a[3][4] = {{0.25, -60.0, -0.04, 9.0}, {0.5, -90.0, -0.02, 3.0}, {0.0, 0.0, 1.0, 0.0}};
    const double b[] = {0.0, 0.0, 1.0};
    for (int j = 0; j < 4; ++j) s.set_objective(j, c[j]);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 4; ++j) s.set_coef(i, j, a[i][j]);
        s.set_rhs(i, b[i]);
    }
    const auto r = s.solve();
    EXPECT_NEAR(r.value, 0.05, 1e-12);
}

TEST(Simplex, Errors) {
    DenseSimplex neg(1, 1);
    EXPECT_THROW(neg.set_rhs(0, -1.0), PreconditionError);

    DenseSimplex unbounded(1, 2);
    unbounded.set_objective(0, 1.0);
    unbounded.set_coef(0, 0, -1.0);
    unbounded.set_rhs(0, 1.0);
    EXPECT_THROW(unbounded.solve(), Error);

    const LpProblem lp = build_lp(gen_example3(10));
    DenseSimplex s(lp.num_rows(), lp.num_variables());
    for (std::size_t k = 0; k < lp.num_variables(); ++k) {
        s.set_objective(k, lp.objective[k]);
        s.set_coef(k % 3, k, lp.bids[k]);
        s.set_coef(3 + k / 3, k, 1.0);
    }
    for (std::size_t i = 0; i < 3; ++i) s.set_rhs(i, lp.budgets[i]);
    for (std::size_t t = 0; t < 20; ++t) s.set_rhs(3 + t, 1.0);
    try {
        s.solve(1e-9, 2);
        FAIL() << "expected the iteration cap to trigger";
    } catch (const LpIterationError& e) {
        EXPECT_EQ(e.last_basis().size(), lp.num_rows());
    }
}

TEST(BuildLp, Dimensions) {
    const Instance inst = make({1.0, 2.0}, {{1.0, 0.0}, {0.5, 0.5}, {0.0, 2.0}});
    const LpProblem lp = build_lp(inst);
    EXPECT_EQ(lp.num_variables(), 6u);
    EXPECT_EQ(lp.num_rows(), 5u);
    const Instance zero = make({1.0, 2.0}, {{0.0, 0.0}});
    const LpProblem z = build_lp(zero);
    for (double c : z.objective) EXPECT_EQ(c, 0.0);
    EXPECT_DOUBLE_EQ(solve_lp(z).value, 0.0);
}

TEST(SolveLp, SingleEdge) {
    const Instance inst = make({1.0}, {{1.0}});
    const auto r = solve_lp(build_lp(inst));
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_NEAR(r.x[0], 1.0, 1e-12);
    EXPECT_TRUE(r.integral);
    expect_optimal_duals(inst, r);
}

TEST(SolveLp, AdversaryN4) {
    const Instance inst = gen_adversary(4, GreedyAwarePolicy{}).instance;
    const auto r = solve_lp(build_lp(inst));
    EXPECT_NEAR(r.value, 15.0, 1e-8);
    expect_optimal_duals(inst, r);
}

TEST(SolveLp, Example3) {
    const Instance inst = gen_example3(10);
    const auto r = solve_lp(build_lp(inst));
    EXPECT_NEAR(r.value, 20.0, 1e-8);
    expect_optimal_duals(inst, r);
    // Feasible witness: every arrival to resource 3 fits 1.5n exactly.
    double load = 0.0;
    for (std::size_t t = 1; t <= 20; ++t) load += inst.bid(2, t);
    EXPECT_DOUBLE_EQ(load, 15.0);
}

TEST(SolveLp, DualsOnRandomInstances) {
    for (std::uint64_t s = 0; s < 25; ++s) {
        const Instance inst = gen_random_smallbid(2 + s % 4, 4 + s % 9, 0.5, 70 + s);
        const auto r = solve_lp(build_lp(inst));
        expect_optimal_duals(inst, r);
        EXPECT_TRUE(validate_shares(inst, r));
    }
}

TEST(SolveLp, PermutationInvariance) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Instance inst = gen_random_smallbid(4, 8, 0.5, 400 + s);
        std::vector<std::size_t> rp(4), tp(8);
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(tp.begin(), tp.end(), 0);
        std::reverse(rp.begin(), rp.end());
        std::rotate(tp.begin(), tp.begin() + 3, tp.end());
        const double a = solve_lp(build_lp(inst)).value;
        const double b = solve_lp(build_lp(permuted(inst, rp, tp))).value;
        EXPECT_NEAR(a, b, 1e-8 * std::max(1.0, a));
    }
}

TEST(SolveLp, DualBoundMatchesDense) {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Instance inst = gen_random_smallbid(3, 120, 0.05, 900 + s);
        const auto dense = solve_lp_dense(build_lp(inst));
        const auto bound = solve_lp_dual_bound(inst);
        EXPECT_EQ(bound.method, "dual-cutting-plane");
        EXPECT_NEAR(bound.value, dense.value, 1e-6 * dense.value);
        EXPECT_GE(bound.upperBound, dense.value - 1e-6 * dense.value);
    }
}

TEST(SolveLp, BenchmarkRoutes) {
    EXPECT_EQ(lp_benchmark(gen_adversary(10, GreedyAwarePolicy{}).instance).method, "analytic-tight");
    EXPECT_EQ(lp_benchmark(gen_example1()).method, "dense-simplex");
    EXPECT_NEAR(lp_benchmark(gen_example3(10)).value, 20.0, 1e-9);
}

TEST(Aggregated, MatchesFullLp) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Instance inst = s % 2 ? gen_bmatching(4, 30, 300 + s, 0.5) : gen_upper_triangular(2 + s % 5, 2 + s % 4);
        const ArrivalTypes types = arrival_types(inst);
        ASSERT_LT(types.size(), inst.num_arrivals()) << inst.label();
        std::size_t members = 0;
        for (const auto& m : types.members) members += m.size();
        EXPECT_EQ(members, inst.num_arrivals());
        const auto agg = solve_lp_aggregated(inst, types);
        const auto full = solve_lp_dense(build_lp(inst));
        EXPECT_NEAR(agg.value, full.value, 1e-8 * std::max(1.0, full.value)) << inst.label();
        EXPECT_TRUE(validate_shares(inst, agg));
        expect_optimal_duals(inst, agg);
    }
}

TEST(Aggregated, LargeTriangular) {
    // n * c arrivals but only n distinct bid vectors; OPT matches block k to resource k.
    const Instance inst = gen_upper_triangular(15, 1000);
    const auto r = lp_benchmark(inst);
    EXPECT_EQ(r.method, "aggregated-simplex");
    EXPECT_NEAR(r.value, 15000.0, 1e-6);
    EXPECT_TRUE(validate_shares(inst, r, 1e-7));
}

TEST(Aggregated, DistinctArrivalsStayUnmerged) {
    const Instance inst = gen_random_smallbid(3, 12, 0.5, 5);
    EXPECT_EQ(arrival_types(inst).size(), inst.num_arrivals());
    EXPECT_EQ(lp_benchmark(inst).method, "dense-simplex");
}

TEST(Bruteforce, SmallCases) {
    EXPECT_DOUBLE_EQ(solve_bruteforce(make({1.0}, {{1.0}})).value, 1.0);
    EXPECT_DOUBLE_EQ(solve_bruteforce(gen_adversary(3, GreedyAwarePolicy{}).instance).value, 8.0);
    EXPECT_THROW(solve_bruteforce(gen_random_smallbid(4, 30, 0.5, 1)), PreconditionError);
}

TEST(Bruteforce, CappedValueCountsPartialMatch) {
    // Budget 3, bids 2 and 2: the second match is capped at the remaining 1.
    const auto r = solve_bruteforce(make({3.0}, {{2.0}, {2.0}}));
    EXPECT_DOUBLE_EQ(r.value, 3.0);
    ASSERT_TRUE(r.has_shares());
    EXPECT_DOUBLE_EQ(r.perResource[0], 3.0);
}

TEST(Bruteforce, BelowLpOnRandomInstances) {
    for (std::uint64_t s = 0; s < 40; ++s) {
        const Instance inst = gen_random_smallbid(3, 5, 0.6, 2000 + s);
        const double bf = solve_bruteforce(inst).value;
        const double lp = solve_lp(build_lp(inst)).value;
        EXPECT_LE(bf, lp + 1e-9);
    }
}

TEST(Bruteforce, AgreesWithIntegralLp) {
    std::size_t integralCount = 0;
    for (std::uint64_t s = 0; s < 30; ++s) {
        const Instance inst = gen_bmatching(3, 7, 50 + s, 0.6);
        const auto lp = solve_lp(build_lp(inst));
        const double bf = solve_bruteforce(inst).value;
        if (lp.integral) {
            ++integralCount;
            EXPECT_NEAR(lp.value, bf, 1e-6);
        }
    }
    EXPECT_GT(integralCount, 0u);
}

TEST(Analytic, KnownInstances) {
    const auto a10 = analytic_opt(gen_adversary(10, GreedyAwarePolicy{}).instance);
    ASSERT_TRUE(a10.has_value());
    EXPECT_DOUBLE_EQ(a10->value, 99.0);
    const auto e3 = analytic_opt(gen_example3(10));
    ASSERT_TRUE(e3.has_value());
    EXPECT_DOUBLE_EQ(e3->value, 20.0);
    EXPECT_NEAR(e3->value, solve_lp(build_lp(gen_example3(10))).value, 1e-6);
    const auto e1 = analytic_opt(gen_example1());
    ASSERT_TRUE(e1.has_value());
    // Integral optimum; the LP relaxation is strictly larger here.
    EXPECT_GT(solve_lp(build_lp(gen_example1())).value, e1->value + 0.25);
    EXPECT_NEAR(e1->value, solve_bruteforce(gen_example1()).value, 1e-9);
    const auto e2 = analytic_opt(gen_example2(6));
    ASSERT_TRUE(e2.has_value());
    EXPECT_NEAR(e2->value, solve_lp(build_lp(gen_example2(6))).value, 1e-6);
    EXPECT_FALSE(analytic_opt(gen_random_smallbid(3, 5, 0.5, 1)).has_value());
}

TEST(Analytic, RelabeledInstanceYieldsNone) {
    const Instance e3 = gen_example3(4);
    const Instance fake("example3(n=6)", std::vector<Resource>(e3.resources().begin(), e3.resources().end()),
                        std::vector<Arrival>(e3.arrivals().begin(), e3.arrivals().end()));
    EXPECT_FALSE(analytic_opt(fake).has_value());
}

TEST(OfflineResultTest, OptIsSumOfPerResource) {
    for (const auto& r : {solve_bruteforce(gen_example1()), solve_lp(build_lp(gen_decomposable(3, 20, 2))),
                          *analytic_opt(gen_adversary(5, GreedyAwarePolicy{}).instance)}) {
        ASSERT_TRUE(r.has_shares());
        double s = 0.0;
        for (double v : r.perResource) s += v; // rewards are 1 on these instances
        EXPECT_NEAR(s, r.value, 1e-8 * std::max(1.0, r.value));
    }
}

TEST(Mps, StructureAndCounts) {
    const Instance inst = make({1.0, 2.0}, {{1.0, 0.0}, {0.5, 0.5}});
    std::ostringstream os;
    write_mps(build_lp(inst), os);
    const std::string s = os.str();
    for (const char* section : {"NAME", "ROWS", "COLUMNS", "RHS", "ENDATA"}) EXPECT_NE(s.find(section), std::string::npos);
    std::istringstream in(s);
    std::string line, mode;
    std::size_t objEntries = 0, rowsL = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] != ' ') {
            mode = line.substr(0, line.find(' '));
            continue;
        }
        if (mode == "ROWS" && line.rfind(" L", 0) == 0) ++rowsL;
        if (mode == "COLUMNS" && line.find("OBJ") != std::string::npos) ++objEntries;
    }
    EXPECT_EQ(rowsL, 4u);
    EXPECT_EQ(objEntries, 3u);
}

TEST(Kinds, StringRoundTrip) {
    for (auto k : {OfflineKind::Lp, OfflineKind::Bruteforce, OfflineKind::Analytic})
        EXPECT_EQ(offline_kind_from_string(to_string(k)), k);
    EXPECT_THROW(offline_kind_from_string("milp"), PreconditionError);
}
