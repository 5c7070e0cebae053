#pragma once

#include <optional>
#include <string>
#include <vector>

#include "generators.hpp"
#include "policies.hpp"

namespace adwords {

/// The target disagreed with itself when replayed on the final instance.
class DeterminismError : public Error {
public:
    using Error::Error;
};

/// Which resource received label k (capacity k) and when.
struct PhaseRecord {
    std::size_t label = 0;     // k in 1..n-1
    ResourceId resource = 0;   // original id
    std::size_t phase = 0;     // phase in which the label was fixed; 0 = assigned after the target declined
    std::size_t arrival = 0;   // 1-based arrival index of the saturating match (0 if none)
};

struct AdversaryTranscript {
    Instance instance;
    double algValue = 0.0;
    double optValue = 0.0;
    std::vector<PhaseRecord> phaseLog;
    ResourceId bigResource = 0; // the resource playing "resource n"
    std::vector<std::optional<ResourceId>> matches;

    double ratio() const { return optValue > 0.0 ? algValue / optValue : 0.0; }
};

inline double adversary_big_capacity(std::size_t n) {
    const double dn = static_cast<double>(n);
    return dn - 1.0 + dn * (dn - 1.0) / 2.0;
}

/// Adaptive construction capping deterministic algorithms at 1/2.
///
/// Capacities are fixed lazily: the first unlabeled resource whose match count
/// reaches L (starting at L = 1) becomes resource L with capacity L, which makes
/// it exhausted right then. Before its label is fixed a resource looks to
/// budget-aware targets as if it had the big capacity. Phase k offers n-k+1 unit
/// arrivals to every resource except labels 1..k-1; phase n offers n(n-1)/2 unit
/// arrivals to labels 1..n-1. The final instance is replayed through a fresh copy
/// of the target and must reproduce the interactive transcript.
template <class Policy>
    requires ObliviousPolicy<Policy> || AwarePolicy<Policy>
AdversaryTranscript gen_adversary(std::size_t n, const Policy& target) {
    if (n < 2) throw PreconditionError("gen_adversary requires n >= 2");
    constexpr bool aware = AwarePolicy<Policy>;
    const double big = adversary_big_capacity(n);

    Policy policy = target;
    std::vector<std::size_t> label(n, 0); // 0 = unlabeled
    std::vector<double> count(n, 0.0);
    std::vector<char> active(n, 1);
    std::vector<double> rewards(n, 1.0), remaining(n, big), budgets(n, big);
    std::vector<Arrival> arrivals;
    std::vector<std::optional<ResourceId>> matches;
    std::vector<PhaseRecord> log;
    std::size_t next = 1;

    auto offer = [&](std::vector<double> bids) {
        arrivals.push_back(Arrival{bids});
        const std::size_t t = arrivals.size();
        std::optional<ResourceId> pick;
        if constexpr (aware) {
            AwareView v;
            v.t = t;
            v.bids = arrivals.back().bids;
            v.active = active;
            v.rewards = rewards;
            v.remaining = remaining;
            v.budgets = budgets;
            pick = policy.choose(v);
        } else {
            ObliviousView v;
            v.t = t;
            v.bids = arrivals.back().bids;
            v.active = active;
            v.rewards = rewards;
            pick = policy.choose(v);
        }
        if (pick && (*pick >= n || !active[*pick] || !(arrivals.back().bids[*pick] > 0.0))) pick.reset();
        matches.push_back(pick);
        return pick;
    };

    for (std::size_t k = 1; k + 1 <= n; ++k) {
        std::vector<double> bids(n, 1.0);
        for (ResourceId i = 0; i < n; ++i)
            if (label[i] != 0 && label[i] < k) bids[i] = 0.0;
        for (std::size_t a = 0; a < n - k + 1; ++a) {
            const auto pick = offer(bids);
            if (!pick) continue;
            const ResourceId i = *pick;
            count[i] += 1.0;
            remaining[i] -= 1.0;
            if (label[i] == 0 && next <= n - 1 && count[i] >= static_cast<double>(next)) {
                label[i] = next;
                budgets[i] = static_cast<double>(next);
                remaining[i] = 0.0;
                active[i] = 0;
                log.push_back({next, i, k, arrivals.size()});
                ++next;
            } else if (remaining[i] <= 0.0) {
                remaining[i] = 0.0;
                active[i] = 0;
            }
        }
    }

    // Targets that decline matches may leave labels unassigned; fill them in id
    // order, keeping the last unlabeled resource as the big one.
    std::vector<ResourceId> unlabeled;
    for (ResourceId i = 0; i < n; ++i)
        if (label[i] == 0) unlabeled.push_back(i);
    for (std::size_t u = 0; u + 1 < unlabeled.size(); ++u) {
        const ResourceId i = unlabeled[u];
        label[i] = next;
        budgets[i] = static_cast<double>(next);
        remaining[i] = budgets[i] - count[i];
        if (remaining[i] <= 0.0) {
            remaining[i] = 0.0;
            active[i] = 0;
        }
        log.push_back({next, i, 0, 0});
        ++next;
    }
    const ResourceId bigId = unlabeled.back();
    label[bigId] = n;

    const std::size_t lastPhase = n * (n - 1) / 2;
    std::vector<double> bids(n, 1.0);
    bids[bigId] = 0.0;
    for (std::size_t a = 0; a < lastPhase; ++a) {
        const auto pick = offer(bids);
        if (!pick) continue;
        remaining[*pick] -= 1.0;
        if (remaining[*pick] <= kEventTol) {
            remaining[*pick] = 0.0;
            active[*pick] = 0;
        }
    }

    std::vector<Resource> res(n);
    for (ResourceId i = 0; i < n; ++i) res[i] = Resource{i, budgets[i], 1.0};
    Instance inst("adversary(n=" + std::to_string(n) + ")", std::move(res), std::move(arrivals));

    for (int rep = 0; rep < 2; ++rep) {
        Policy fresh = target;
        const Allocation replay = run_integral(inst, fresh);
        for (std::size_t t = 1; t <= inst.num_arrivals(); ++t)
            if (replay.matches[t - 1] != matches[t - 1])
                throw DeterminismError("target is not a deterministic budget-oblivious policy: replay " +
                                       std::to_string(rep + 1) + " disagrees at arrival " + std::to_string(t));
    }

    AdversaryTranscript tr;
    Policy fresh = target;
    const Allocation a = run_integral(inst, fresh);
    tr.algValue = a.total;
    tr.optValue = static_cast<double>(n * n - 1);
    tr.phaseLog = std::move(log);
    tr.bigResource = bigId;
    tr.matches = std::move(matches);
    tr.instance = std::move(inst);
    return tr;
}

} // namespace adwords
