#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "core.hpp"
#include "instance.hpp"

namespace adwords {

/// A maximal sub-interval [tau1, tau2) of arrival t's unit interval matched to one resource.
struct Segment {
    ResourceId resource = 0;
    std::size_t arrival = 0; // 1-based t, tau1 and tau2 lie in [t, t+1]
    double tau1 = 0.0;
    double tau2 = 0.0;
    double consumed = 0.0; // units of the resource's budget used
    double price = 0.0;    // b_{it} r_i (1 - g(y_i))

    double length() const noexcept { return tau2 - tau1; }
};

/// Output of the continuous-time fractional algorithm for one seed vector.
class FractionalAllocation {
public:
    std::vector<Segment> segments;          // ordered by time
    std::vector<std::size_t> arrivalStart;  // segments of arrival t are [arrivalStart[t-1], arrivalStart[t])
    std::vector<double> exhaustTime;        // tau at which x^f_i reaches B_i (kInf if never)
    std::vector<double> consumed;           // f-ALG_i(Y) = x^f_i(T+1, Y)
    std::vector<double> revenue;            // r_i f-ALG_i(Y)
    std::vector<double> budgets;
    double total = 0.0;

    std::size_t num_arrivals() const noexcept { return arrivalStart.empty() ? 0 : arrivalStart.size() - 1; }
    std::size_t num_resources() const noexcept { return consumed.size(); }

    std::span<const Segment> segments_of(std::size_t t) const {
        return std::span<const Segment>(segments).subspan(arrivalStart[t - 1],
                                                          arrivalStart[t] - arrivalStart[t - 1]);
    }

    /// x^f_i(tau, Y): budget of i allocated before time tau.
    double xf(ResourceId i, double tau) const {
        double x = 0.0;
        for (const auto& s : segments) {
            if (s.tau1 >= tau) break;
            if (s.resource != i) continue;
            if (s.tau2 <= tau) x += s.consumed;
            else x += s.consumed * (tau - s.tau1) / s.length();
        }
        return x;
    }

    /// i in I(tau, Y).
    bool available(ResourceId i, double tau) const { return tau < exhaustTime[i]; }

    std::vector<ResourceId> availability(double tau) const {
        std::vector<ResourceId> out;
        for (ResourceId i = 0; i < exhaustTime.size(); ++i)
            if (available(i, tau)) out.push_back(i);
        return out;
    }

    /// Price earned at moment tau (lambda_tau(Y)); 0 while no segment is active.
    double price_at(double tau) const {
        const auto t = static_cast<std::size_t>(std::floor(tau));
        if (t < 1 || t > num_arrivals()) return 0.0;
        for (const auto& s : segments_of(t))
            if (tau >= s.tau1 && tau < s.tau2) return s.price;
        return 0.0;
    }

    /// Integral of lambda_tau over [1, T+1).
    double lambda_net() const {
        double s = 0.0;
        for (const auto& seg : segments) s += seg.price * seg.length();
        return s;
    }

    /// Integral of lambda_tau over [t, t+1).
    double lambda_arrival(std::size_t t) const {
        double s = 0.0;
        for (const auto& seg : segments_of(t)) s += seg.price * seg.length();
        return s;
    }
};

/// Fractional GPG: within [t, t+1) time is given to the best-priced available
/// resource until its budget runs out, then to the next one.
inline FractionalAllocation run_fgpg(const Instance& inst, const SeedVector& y, double beta,
                                     TieBreak tb = TieBreak::LowestId) {
    require_seed_length(inst, y);
    if (inst.hidden_budgets())
        throw BudgetVisibilityError("fractional GPG is budget-aware; budgets of this instance are hidden");
    const TradeoffFunction g(beta);
    const std::size_t n = inst.num_resources();
    const std::size_t T = inst.num_arrivals();

    FractionalAllocation f;
    f.exhaustTime.assign(n, kInf);
    f.consumed.assign(n, 0.0);
    f.revenue.assign(n, 0.0);
    f.budgets.resize(n);
    f.arrivalStart.reserve(T + 1);
    f.segments.reserve(T + n);

    std::vector<double> factor(n);
    std::vector<double> x(n, 0.0);
    std::vector<char> avail(n);
    for (ResourceId i = 0; i < n; ++i) {
        factor[i] = inst.reward(i) * g.complement(y[i]);
        f.budgets[i] = inst.budget(i);
        avail[i] = inst.budget(i) > 0.0;
        if (!avail[i]) f.exhaustTime[i] = 1.0;
    }

    std::vector<std::pair<double, ResourceId>> cand;
    cand.reserve(n);
    for (std::size_t t = 1; t <= T; ++t) {
        f.arrivalStart.push_back(f.segments.size());
        const auto& bids = inst.arrival(t).bids;
        cand.clear();
        for (ResourceId i = 0; i < n; ++i) {
            if (!avail[i] || !(bids[i] > 0.0)) continue;
            const double p = bids[i] * factor[i];
            if (p > 0.0) cand.emplace_back(p, i);
        }
        std::sort(cand.begin(), cand.end(), [tb](const auto& a, const auto& b) {
            return beats(a.first, a.second, b.first, b.second, tb);
        });

        double offset = 0.0;
        for (const auto& [p, i] : cand) {
            const double left = 1.0 - offset;
            if (left <= kEventTol) break;
            const double need = (f.budgets[i] - x[i]) / bids[i];
            Segment s;
            s.resource = i;
            s.arrival = t;
            s.price = p;
            s.tau1 = static_cast<double>(t) + offset;
            double dt;
            if (need <= left + kEventTol) {
                dt = std::min(need, left);
                s.consumed = f.budgets[i] - x[i];
                x[i] = f.budgets[i];
                avail[i] = 0;
            } else {
                dt = left;
                s.consumed = bids[i] * dt;
                x[i] += s.consumed;
            }
            offset += dt;
            if (offset > 1.0 - kEventTol && dt == left) offset = 1.0;
            s.tau2 = static_cast<double>(t) + offset;
            if (!avail[i]) f.exhaustTime[i] = s.tau2;
            if (s.tau2 > s.tau1) f.segments.push_back(s);
        }
    }
    f.arrivalStart.push_back(f.segments.size());
    for (ResourceId i = 0; i < n; ++i) {
        f.consumed[i] = x[i];
        f.revenue[i] = inst.reward(i) * x[i];
        f.total += f.revenue[i];
    }
    return f;
}

} // namespace adwords
