#pragma once

#include <concepts>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "instance.hpp"

namespace adwords {

/// What a budget-oblivious policy may see on arrival t: the bids and which
/// resources are still participating. There is deliberately no budget field.
struct ObliviousView {
    std::size_t t = 0; // 1-based arrival index
    std::span<const double> bids;
    std::span<const char> active; // 1 while the resource has budget left
    std::span<const double> rewards;

    std::size_t num_resources() const noexcept { return bids.size(); }
};

/// Budget-aware view: adds remaining and original budgets.
struct AwareView : ObliviousView {
    std::span<const double> remaining;
    std::span<const double> budgets;
};

template <class P>
concept ObliviousPolicy = requires(P& p, const ObliviousView& v) {
    { p.choose(v) } -> std::same_as<std::optional<ResourceId>>;
};

template <class P>
concept AwarePolicy = requires(P& p, const AwareView& v) {
    { p.choose(v) } -> std::same_as<std::optional<ResourceId>>;
} && !ObliviousPolicy<P>;

namespace detail {

/// Argmax of a positive score over active resources; ties by `tb`; zero scores never win.
template <class Score>
std::optional<ResourceId> argmax_positive(const ObliviousView& v, TieBreak tb, Score&& score) {
    std::optional<ResourceId> best;
    double bestPrice = 0.0;
    for (ResourceId i = 0; i < v.num_resources(); ++i) {
        if (!v.active[i] || !(v.bids[i] > 0.0)) continue;
        const double p = score(i);
        if (!(p > 0.0)) continue;
        if (!best || beats(p, i, bestPrice, *best, tb)) {
            best = i;
            bestPrice = p;
        }
    }
    return best;
}

} // namespace detail

/// Generalized Perturbed-Greedy: randomized bid prices b r (1 - g(y_i)).
class GpgPolicy {
public:
    GpgPolicy(SeedVector seeds, double beta, TieBreak tb = TieBreak::LowestId)
        : seeds_(std::move(seeds)), g_(beta), tb_(tb) {
        factor_.resize(seeds_.size());
        for (std::size_t i = 0; i < seeds_.size(); ++i) factor_[i] = g_.complement(seeds_[i]);
    }

    static constexpr const char* name = "gpg";

    std::optional<ResourceId> choose(const ObliviousView& v) const {
        return detail::argmax_positive(v, tb_, [&](ResourceId i) { return price(v, i); });
    }

    double price(const ObliviousView& v, ResourceId i) const { return v.bids[i] * v.rewards[i] * factor_[i]; }

    const SeedVector& seeds() const noexcept { return seeds_; }
    const TradeoffFunction& tradeoff() const noexcept { return g_; }

private:
    SeedVector seeds_;
    TradeoffFunction g_;
    TieBreak tb_;
    std::vector<double> factor_;
};

/// Highest bid times reward among participating resources.
class GreedyObliviousPolicy {
public:
    explicit GreedyObliviousPolicy(TieBreak tb = TieBreak::LowestId) : tb_(tb) {}
    static constexpr const char* name = "greedy-oblivious";

    std::optional<ResourceId> choose(const ObliviousView& v) const {
        return detail::argmax_positive(v, tb_, [&](ResourceId i) { return price(v, i); });
    }
    double price(const ObliviousView& v, ResourceId i) const { return v.bids[i] * v.rewards[i]; }

private:
    TieBreak tb_;
};

/// argmax min{b, B_i(t)} r_i.
class GreedyAwarePolicy {
public:
    explicit GreedyAwarePolicy(TieBreak tb = TieBreak::LowestId) : tb_(tb) {}
    static constexpr const char* name = "greedy-aware";

    std::optional<ResourceId> choose(const AwareView& v) const {
        return detail::argmax_positive(v, tb_, [&](ResourceId i) { return price(v, i); });
    }
    double price(const AwareView& v, ResourceId i) const {
        return std::min(v.bids[i], v.remaining[i]) * v.rewards[i];
    }

private:
    TieBreak tb_;
};

/// Bid pricing with the remaining-budget factor 1 - exp(-B_i(t)/B_i).
class MsvvPolicy {
public:
    explicit MsvvPolicy(TieBreak tb = TieBreak::LowestId) : tb_(tb) {}
    static constexpr const char* name = "msvv";

    std::optional<ResourceId> choose(const AwareView& v) const {
        return detail::argmax_positive(v, tb_, [&](ResourceId i) { return price(v, i); });
    }
    double price(const AwareView& v, ResourceId i) const {
        return v.bids[i] * v.rewards[i] * factor(v.remaining[i], v.budgets[i]);
    }
    static double factor(double remaining, double budget) {
        if (!(budget > 0.0) || !(remaining > 0.0)) return 0.0;
        return -std::expm1(-remaining / budget);
    }

private:
    TieBreak tb_;
};

/// Adapts an arbitrary callable into an oblivious policy (test targets, adversary probes).
class FunctionPolicy {
public:
    using Fn = std::function<std::optional<ResourceId>(const ObliviousView&)>;
    explicit FunctionPolicy(Fn fn) : fn_(std::move(fn)) {}
    std::optional<ResourceId> choose(const ObliviousView& v) const { return fn_(v); }

private:
    Fn fn_;
};

/// Result of an integral online run.
struct Allocation {
    std::vector<std::optional<ResourceId>> matches; // per arrival
    std::vector<double> paid;                       // units paid per arrival (0 if unmatched)
    std::vector<double> price;                      // winning score per arrival (0 if unmatched)
    std::vector<double> consumed;                   // ALG_i(Y), units of i's budget used
    std::vector<double> revenue;                    // r_i ALG_i(Y)
    std::vector<std::size_t> exhaustedAt;           // arrival index at which i ran out, 0 if never
    double total = 0.0;                             // ALG(Y)

    std::size_t num_arrivals() const noexcept { return matches.size(); }

    /// x_i(t,Y): budget of each resource consumed by arrivals before t (1-based, t <= T+1).
    std::vector<double> consumed_before(std::size_t t) const {
        std::vector<double> x(consumed.size(), 0.0);
        for (std::size_t s = 1; s < t && s <= matches.size(); ++s)
            if (matches[s - 1]) x[*matches[s - 1]] += paid[s - 1];
        return x;
    }
};

namespace detail {

inline double exhaustion_tol(double budget) { return kEventTol * std::max(1.0, budget); }

} // namespace detail

/// Runs an integral online policy. Budgets are consulted only to enforce
/// payments and to emit exhaustion events; oblivious policies never see them.
template <class Policy>
    requires ObliviousPolicy<Policy> || AwarePolicy<Policy>
Allocation run_integral(const Instance& inst, Policy& policy) {
    constexpr bool aware = AwarePolicy<Policy>;
    if (aware && inst.hidden_budgets())
        throw BudgetVisibilityError("budget-aware policy cannot run on an instance with hidden budgets");

    const std::size_t n = inst.num_resources();
    const std::size_t T = inst.num_arrivals();
    std::vector<double> remaining(n), budgets(n), rewards(n);
    std::vector<char> active(n);
    for (ResourceId i = 0; i < n; ++i) {
        budgets[i] = remaining[i] = inst.budget(i);
        rewards[i] = inst.reward(i);
        active[i] = inst.budget(i) > 0.0;
    }

    Allocation a;
    a.matches.assign(T, std::nullopt);
    a.paid.assign(T, 0.0);
    a.price.assign(T, 0.0);
    a.consumed.assign(n, 0.0);
    a.revenue.assign(n, 0.0);
    a.exhaustedAt.assign(n, 0);

    for (std::size_t t = 1; t <= T; ++t) {
        const auto& bids = inst.arrival(t).bids;
        std::optional<ResourceId> pick;
        double score = 0.0;
        if constexpr (aware) {
            AwareView v;
            v.t = t;
            v.bids = bids;
            v.active = active;
            v.rewards = rewards;
            v.remaining = remaining;
            v.budgets = budgets;
            pick = policy.choose(v);
            if (pick) {
                if constexpr (requires { policy.price(v, *pick); }) score = policy.price(v, *pick);
            }
        } else {
            ObliviousView v;
            v.t = t;
            v.bids = bids;
            v.active = active;
            v.rewards = rewards;
            pick = policy.choose(v);
            if (pick) {
                if constexpr (requires { policy.price(v, *pick); }) score = policy.price(v, *pick);
            }
        }
        if (!pick) continue;
        const ResourceId i = *pick;
        if (i >= n || !active[i] || !(bids[i] > 0.0)) continue; // declined or invalid choice
        double pay = bids[i];
        if (remaining[i] - pay <= detail::exhaustion_tol(budgets[i])) {
            pay = remaining[i];
            remaining[i] = 0.0;
            active[i] = 0;
            a.exhaustedAt[i] = t;
        } else {
            remaining[i] -= pay;
        }
        a.matches[t - 1] = i;
        a.paid[t - 1] = pay;
        a.price[t - 1] = score;
        a.consumed[i] += pay;
    }
    for (ResourceId i = 0; i < n; ++i) {
        a.revenue[i] = inst.reward(i) * a.consumed[i];
        a.total += a.revenue[i];
    }
    return a;
}

template <class Policy>
Allocation run_integral(const Instance& inst, Policy&& policy) {
    auto p = std::forward<Policy>(policy);
    return run_integral(inst, p);
}

inline Allocation run_gpg(const Instance& inst, const SeedVector& y, double beta,
                          TieBreak tb = TieBreak::LowestId) {
    require_seed_length(inst, y);
    GpgPolicy p(y, beta, tb);
    return run_integral(inst, p);
}

inline Allocation run_greedy_oblivious(const Instance& inst, TieBreak tb = TieBreak::LowestId) {
    GreedyObliviousPolicy p(tb);
    return run_integral(inst, p);
}

inline Allocation run_greedy_aware(const Instance& inst, TieBreak tb = TieBreak::LowestId) {
    GreedyAwarePolicy p(tb);
    return run_integral(inst, p);
}

inline Allocation run_msvv(const Instance& inst, TieBreak tb = TieBreak::LowestId) {
    MsvvPolicy p(tb);
    return run_integral(inst, p);
}

/// Total revenue recomputed from the match list alone: r_i min{B_i, sum of matched bids}.
inline double evaluate(const Allocation& alloc, const Instance& inst) {
    std::vector<double> bidSum(inst.num_resources(), 0.0);
    for (std::size_t t = 1; t <= alloc.matches.size(); ++t)
        if (alloc.matches[t - 1]) bidSum[*alloc.matches[t - 1]] += inst.bid(*alloc.matches[t - 1], t);
    double total = 0.0;
    for (ResourceId i = 0; i < inst.num_resources(); ++i)
        total += inst.reward(i) * std::min(inst.budget(i), bidSum[i]);
    return total;
}

} // namespace adwords
