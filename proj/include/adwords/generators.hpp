#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "instance.hpp"
#include "rng.hpp"

namespace adwords {

namespace detail {

inline std::vector<Resource> make_resources(const std::vector<double>& budgets,
                                            const std::vector<double>& rewards = {}) {
    std::vector<Resource> res(budgets.size());
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        res[i].id = i;
        res[i].budget = budgets[i];
        res[i].reward = rewards.empty() ? 1.0 : rewards[i];
    }
    return res;
}

inline Arrival make_arrival(std::vector<double> bids) { return Arrival{std::move(bids)}; }

} // namespace detail

/// Example 1 snippet. Resources 0 and 1 are the example's resources 1 and 2;
/// resource 2 is a dummy whose huge bid absorbs the prefix, so resource 0 is
/// untouched and resource 1 has exactly one unit left when arrival t comes.
inline Instance gen_example1() {
    std::vector<Arrival> arr;
    arr.push_back(detail::make_arrival({0.0, 1.0, 0.0}));  // drains resource 1 from 2 to 1
    arr.push_back(detail::make_arrival({1.0, 0.0, 64.0})); // taken by the dummy for any y_0 < 1
    arr.push_back(detail::make_arrival({1.0, 1.0, 0.0}));  // arrival t
    arr.push_back(detail::make_arrival({2.0, 4.0, 0.0}));  // arrival t+1
    return Instance("example1", detail::make_resources({4.0, 2.0, 128.0}), std::move(arr));
}

/// Index of arrival t in gen_example1().
inline constexpr std::size_t kExample1FocalArrival = 3;

/// Example 2. Resources 0..n-2 have budget n-1, resource n-1 has (n-1)^1.98.
/// A prefix of exclusive arrivals (bid n-2) leaves each small resource with one unit.
/// The 2n-2 focal arrivals follow.
inline Instance gen_example2(std::size_t n) {
    if (n < 3) throw PreconditionError("gen_example2 requires n >= 3");
    const double m = static_cast<double>(n - 1);
    std::vector<double> budgets(n, m);
    budgets[n - 1] = std::pow(m, 1.98);
    std::vector<Arrival> arr;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        std::vector<double> b(n, 0.0);
        b[j] = m - 1.0;
        arr.push_back(detail::make_arrival(std::move(b)));
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        std::vector<double> b(n, 0.0);
        b[j] = 1.0;
        b[n - 1] = 2.0;
        arr.push_back(detail::make_arrival(std::move(b)));
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        std::vector<double> b(n, 0.0);
        b[j] = std::pow(m, 0.99);
        b[n - 1] = std::pow(m, 0.98);
        arr.push_back(detail::make_arrival(std::move(b)));
    }
    return Instance("example2(n=" + std::to_string(n) + ")", detail::make_resources(budgets), std::move(arr));
}

/// First focal arrival (1-based) of gen_example2(n).
inline std::size_t example2_focal_start(std::size_t n) { return n; }

/// Example 3: budgets n, n, 1.5n; 2n arrivals with b_1 = b_2 = 1 and b_3 = 1 then 0.5.
inline Instance gen_example3(std::size_t n) {
    if (n < 2 || n % 2 != 0) throw PreconditionError("gen_example3 requires an even n >= 2");
    const double dn = static_cast<double>(n);
    std::vector<Arrival> arr;
    for (std::size_t t = 1; t <= 2 * n; ++t)
        arr.push_back(detail::make_arrival({1.0, 1.0, t <= n ? 1.0 : 0.5}));
    return Instance("example3(n=" + std::to_string(n) + ")", detail::make_resources({dn, dn, 1.5 * dn}),
                    std::move(arr));
}

/// Decomposable bids from explicit factors: b_it = mask * bi[i] * bt[t].
inline Instance make_decomposable(const std::vector<double>& bi, const std::vector<double>& bt,
                                  const std::vector<std::vector<char>>& mask,
                                  const std::vector<double>& budgets, std::string label) {
    std::vector<Arrival> arr;
    for (std::size_t t = 0; t < bt.size(); ++t) {
        std::vector<double> b(bi.size(), 0.0);
        for (std::size_t i = 0; i < bi.size(); ++i)
            if (mask[t][i]) b[i] = bi[i] * bt[t];
        arr.push_back(detail::make_arrival(std::move(b)));
    }
    return Instance(std::move(label), detail::make_resources(budgets), std::move(arr));
}

/// Random decomposable instance. Budgets are at least max-bid / gammaMax and
/// otherwise a random fraction of each resource's total demand, so some bind.
inline Instance gen_decomposable(std::size_t n, std::size_t T, std::uint64_t seed, double gammaMax = 0.01,
                                 double density = 0.7) {
    if (n < 1 || T < 1) throw PreconditionError("gen_decomposable requires n, T >= 1");
    StreamRng rng(seed);
    std::vector<double> bi(n), bt(T);
    for (auto& v : bi) v = rng.uniform(0.5, 1.0);
    for (auto& v : bt) v = rng.uniform(0.8, 1.0);
    std::vector<std::vector<char>> mask(T, std::vector<char>(n, 0));
    for (auto& row : mask) {
        bool any = false;
        for (auto& m : row) any |= (m = rng.bernoulli(density));
        if (!any) row[static_cast<std::size_t>(rng.integer(0, static_cast<long long>(n) - 1))] = 1;
    }
    std::vector<double> budgets(n);
    for (std::size_t i = 0; i < n; ++i) {
        double demand = 0.0, maxBid = 0.0;
        for (std::size_t t = 0; t < T; ++t)
            if (mask[t][i]) {
                demand += bi[i] * bt[t];
                maxBid = std::max(maxBid, bi[i] * bt[t]);
            }
        const double frac = rng.uniform(0.25, 0.6);
        budgets[i] = std::max({frac * demand, maxBid / gammaMax, 1.0});
    }
    return make_decomposable(bi, bt, mask, budgets,
                             "decomposable(n=" + std::to_string(n) + ",T=" + std::to_string(T) +
                                 ",seed=" + std::to_string(seed) + ")");
}

/// True when every nonzero bid factors as b_i * b_t (relative tolerance `tol`).
/// Factors are propagated through connected components of the support graph.
inline bool is_decomposable(const Instance& inst, double tol = 1e-9) {
    const std::size_t n = inst.num_resources();
    const std::size_t T = inst.num_arrivals();
    std::vector<double> fi(n, 0.0), ft(T, 0.0);
    std::vector<char> seenI(n, 0), seenT(T, 0);
    auto close = [tol](double a, double b) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); };

    for (ResourceId root = 0; root < n; ++root) {
        if (seenI[root]) continue;
        seenI[root] = 1;
        fi[root] = 1.0;
        std::vector<std::pair<bool, std::size_t>> stack{{true, root}};
        while (!stack.empty()) {
            auto [isRes, k] = stack.back();
            stack.pop_back();
            if (isRes) {
                for (std::size_t t = 0; t < T; ++t) {
                    const double b = inst.bid(k, t + 1);
                    if (!(b > 0.0)) continue;
                    const double want = b / fi[k];
                    if (!seenT[t]) {
                        seenT[t] = 1;
                        ft[t] = want;
                        stack.emplace_back(false, t);
                    } else if (!close(ft[t], want)) {
                        return false;
                    }
                }
            } else {
                for (ResourceId i = 0; i < n; ++i) {
                    const double b = inst.bid(i, k + 1);
                    if (!(b > 0.0)) continue;
                    const double want = b / ft[k];
                    if (!seenI[i]) {
                        seenI[i] = 1;
                        fi[i] = want;
                        stack.emplace_back(true, i);
                    } else if (!close(fi[i], want)) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

/// Stochastic-rewards reduction: bids are the success probabilities, budgets are
/// i.i.d. Exp(1) and hidden from budget-oblivious policies.
inline Instance gen_stochastic_rewards(const std::vector<std::vector<double>>& prob, std::size_t n,
                                       std::uint64_t seed) {
    StreamRng rng(seed);
    std::vector<double> budgets(n);
    for (auto& b : budgets) {
        do b = rng.exponential();
        while (!(b > 0.0));
    }
    std::vector<Arrival> arr;
    for (std::size_t t = 0; t < prob.size(); ++t) {
        if (prob[t].size() != n) throw PreconditionError("probability row has the wrong length");
        for (double p : prob[t])
            if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("probabilities must lie in [0,1]");
        arr.push_back(detail::make_arrival(prob[t]));
    }
    return Instance("stochastic-rewards(seed=" + std::to_string(seed) + ")", detail::make_resources(budgets),
                    std::move(arr), true);
}

/// Random small-bid market. Each arrival bids U(0,1] on a random subset
/// (never empty); budgets are a random fraction of demand, floored so gamma <= gammaMax.
inline Instance gen_random_smallbid(std::size_t n, std::size_t T, double gammaMax, std::uint64_t seed,
                                    double density = 0.7) {
    if (!(gammaMax > 0.0 && gammaMax <= 1.0)) throw PreconditionError("gammaMax must lie in (0, 1]");
    if (n < 1) throw PreconditionError("gen_random_smallbid requires n >= 1");
    StreamRng rng(seed);
    std::vector<Arrival> arr;
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<double> b(n, 0.0);
        bool any = false;
        for (auto& v : b)
            if (rng.bernoulli(density)) {
                v = 1.0 - rng.uniform(); // (0, 1]
                any = true;
            }
        if (!any) b[static_cast<std::size_t>(rng.integer(0, static_cast<long long>(n) - 1))] = 1.0 - rng.uniform();
        arr.push_back(detail::make_arrival(std::move(b)));
    }
    std::vector<double> budgets(n);
    for (std::size_t i = 0; i < n; ++i) {
        double demand = 0.0, maxBid = 0.0;
        for (const auto& a : arr) {
            demand += a.bids[i];
            maxBid = std::max(maxBid, a.bids[i]);
        }
        const double frac = rng.uniform(0.2, 0.6);
        budgets[i] = std::max(frac * demand, maxBid / gammaMax);
        if (!(budgets[i] > 0.0)) budgets[i] = 1.0;
    }
    std::string label = "smallbid(n=" + std::to_string(n) + ",T=" + std::to_string(T) +
                        ",gamma=" + std::to_string(gammaMax) + ",seed=" + std::to_string(seed) + ")";
    return Instance(std::move(label), detail::make_resources(budgets), std::move(arr));
}

/// Random b-matching: 0/1 bids, integer budgets.
inline Instance gen_bmatching(std::size_t n, std::size_t T, std::uint64_t seed, double density = 0.4) {
    StreamRng rng(seed);
    std::vector<Arrival> arr;
    std::vector<double> degree(n, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<double> b(n, 0.0);
        bool any = false;
        for (std::size_t i = 0; i < n; ++i)
            if (rng.bernoulli(density)) {
                b[i] = 1.0;
                degree[i] += 1.0;
                any = true;
            }
        if (!any) {
            const auto i = static_cast<std::size_t>(rng.integer(0, static_cast<long long>(n) - 1));
            b[i] = 1.0;
            degree[i] += 1.0;
        }
        arr.push_back(detail::make_arrival(std::move(b)));
    }
    std::vector<double> budgets(n);
    for (std::size_t i = 0; i < n; ++i)
        budgets[i] = std::max(1.0, std::floor(degree[i] * rng.uniform(0.2, 0.6)));
    return Instance("bmatching(n=" + std::to_string(n) + ",T=" + std::to_string(T) +
                        ",seed=" + std::to_string(seed) + ")",
                    detail::make_resources(budgets), std::move(arr));
}

/// Upper-triangular b-matching: n resources of capacity c; block k (n*c arrivals
/// in total over n blocks of c) bids 1 on resources k..n-1. OPT matches block k to resource k.
inline Instance gen_upper_triangular(std::size_t n, std::size_t capacity) {
    if (n < 1 || capacity < 1) throw PreconditionError("gen_upper_triangular requires n, capacity >= 1");
    std::vector<Arrival> arr;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < capacity; ++c) {
            std::vector<double> b(n, 0.0);
            for (std::size_t i = k; i < n; ++i) b[i] = 1.0;
            arr.push_back(detail::make_arrival(std::move(b)));
        }
    return Instance("triangular(n=" + std::to_string(n) + ",c=" + std::to_string(capacity) + ")",
                    detail::make_resources(std::vector<double>(n, static_cast<double>(capacity))),
                    std::move(arr));
}

/// Obstruction for the classic primal-dual candidate. Resource 0 (large budget)
/// is the only bidder on arrival 1; afterwards `others` resources bid `bigBid` on
/// `later` arrivals where resource 0 also bids 1, so resource 0 almost never wins again.
inline Instance gen_pd_failure(std::size_t others = 5, std::size_t later = 20, double budget0 = 1000.0,
                               double bigBid = 10.0) {
    const std::size_t n = others + 1;
    std::vector<double> budgets(n, bigBid * static_cast<double>(later) * 10.0);
    budgets[0] = budget0;
    std::vector<Arrival> arr;
    std::vector<double> first(n, 0.0);
    first[0] = 1.0;
    arr.push_back(detail::make_arrival(std::move(first)));
    for (std::size_t t = 0; t < later; ++t) {
        std::vector<double> b(n, bigBid);
        b[0] = 1.0;
        arr.push_back(detail::make_arrival(std::move(b)));
    }
    return Instance("pd-failure(others=" + std::to_string(others) + ",later=" + std::to_string(later) + ")",
                    detail::make_resources(budgets), std::move(arr));
}

/// Tiny integer market for oracle cross-checks (<= 3 resources, <= 6 arrivals).
inline Instance gen_random_tiny(std::uint64_t seed) {
    StreamRng rng(seed);
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    const auto T = static_cast<std::size_t>(rng.integer(1, 6));
    std::vector<double> budgets(n), rewards(n);
    for (std::size_t i = 0; i < n; ++i) {
        budgets[i] = static_cast<double>(rng.integer(1, 6));
        rewards[i] = static_cast<double>(rng.integer(1, 3));
    }
    std::vector<Arrival> arr;
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<double> b(n);
        for (auto& v : b) v = static_cast<double>(rng.integer(0, 3));
        arr.push_back(detail::make_arrival(std::move(b)));
    }
    return Instance("tiny(seed=" + std::to_string(seed) + ")", detail::make_resources(budgets, rewards),
                    std::move(arr));
}

} // namespace adwords
