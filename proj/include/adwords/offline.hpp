#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <vector>

#include "instance.hpp"
#include "simplex.hpp"

namespace adwords {

/// max sum r_i b_it x_it  s.t.  sum_t b_it x_it <= B_i,  sum_i x_it <= 1,  x >= 0.
/// Variable x_it has index t0 * n + i with 0-based t0; rows are the n resource
/// rows followed by the T arrival rows.
struct LpProblem {
    std::size_t numResources = 0;
    std::size_t numArrivals = 0;
    std::vector<double> objective;  // n*T
    std::vector<double> bids;       // b_it per variable (resource-row coefficient)
    std::vector<double> budgets;    // n
    std::size_t num_variables() const { return numResources * numArrivals; }
    std::size_t num_rows() const { return numResources + numArrivals; }
    std::size_t var(ResourceId i, std::size_t t) const { return (t - 1) * numResources + i; }
};

inline LpProblem build_lp(const Instance& inst) {
    LpProblem lp;
    lp.numResources = inst.num_resources();
    lp.numArrivals = inst.num_arrivals();
    lp.objective.resize(lp.num_variables());
    lp.bids.resize(lp.num_variables());
    lp.budgets.resize(lp.numResources);
    for (ResourceId i = 0; i < lp.numResources; ++i) lp.budgets[i] = inst.budget(i);
    for (std::size_t t = 1; t <= lp.numArrivals; ++t)
        for (ResourceId i = 0; i < lp.numResources; ++i) {
            const double b = inst.bid(i, t);
            lp.bids[lp.var(i, t)] = b;
            lp.objective[lp.var(i, t)] = inst.reward(i) * b;
        }
    return lp;
}

/// Fixed-column MPS. The objective is negated because MPS minimizes.
inline void write_mps(const LpProblem& lp, std::ostream& os) {
    auto col = [&](std::size_t k) {
        return "X" + std::to_string(k % lp.numResources) + "_" + std::to_string(k / lp.numResources + 1);
    };
    auto row = [&](std::size_t r) {
        return r < lp.numResources ? "R" + std::to_string(r) : "A" + std::to_string(r - lp.numResources + 1);
    };
    char buf[128];
    os << "NAME          ADWORDS\nROWS\n N  OBJ\n";
    for (std::size_t r = 0; r < lp.num_rows(); ++r) os << " L  " << row(r) << '\n';
    os << "COLUMNS\n";
    for (std::size_t k = 0; k < lp.num_variables(); ++k) {
        const std::string c = col(k);
        const std::size_t i = k % lp.numResources;
        const std::size_t t = k / lp.numResources + 1;
        if (lp.objective[k] != 0.0) {
            std::snprintf(buf, sizeof buf, "    %-8s  %-8s  %12.6g\n", c.c_str(), "OBJ", -lp.objective[k]);
            os << buf;
        }
        if (lp.bids[k] != 0.0) {
            std::snprintf(buf, sizeof buf, "    %-8s  %-8s  %12.6g\n", c.c_str(), row(i).c_str(), lp.bids[k]);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "    %-8s  %-8s  %12.6g\n", c.c_str(), row(lp.numResources + t - 1).c_str(), 1.0);
        os << buf;
    }
    os << "RHS\n";
    for (std::size_t r = 0; r < lp.num_rows(); ++r) {
        const double v = r < lp.numResources ? lp.budgets[r] : 1.0;
        std::snprintf(buf, sizeof buf, "    %-8s  %-8s  %12.6g\n", "RHS", row(r).c_str(), v);
        os << buf;
    }
    os << "ENDATA\n";
}

enum class OfflineKind { Lp, Bruteforce, Analytic };

inline std::string to_string(OfflineKind k) {
    switch (k) {
    case OfflineKind::Lp: return "lp";
    case OfflineKind::Bruteforce: return "bruteforce";
    case OfflineKind::Analytic: return "analytic";
    }
    return "?";
}

inline OfflineKind offline_kind_from_string(const std::string& s) {
    if (s == "lp") return OfflineKind::Lp;
    if (s == "bruteforce") return OfflineKind::Bruteforce;
    if (s == "analytic") return OfflineKind::Analytic;
    throw PreconditionError("unknown benchmark '" + s + "'");
}

/// Share of arrival t given to resource i by the offline solution, as a
/// fraction of b_it. Integral solutions give weight 1, except that a resource's
/// last arrival may count only partially when it overflows the budget.
struct OptShare {
    ResourceId resource = 0;
    std::size_t arrival = 0;
    double weight = 0.0;
};

struct OfflineResult {
    double value = 0.0;
    OfflineKind kind = OfflineKind::Lp;
    std::string method;                 // e.g. "dense-simplex", "dual-cutting-plane", "adversary"
    std::vector<double> perResource;    // OPT_i in budget units
    std::vector<OptShare> shares;       // empty for bound-only results
    // LP extras
    std::vector<double> x;              // n*T primal values (dense simplex only)
    std::vector<double> theta, lambda;  // duals
    std::vector<std::size_t> basis;
    double upperBound = 0.0;            // equals value except for bound-only methods
    bool integral = false;

    bool has_shares() const { return !perResource.empty(); }

    /// Shares of one resource, ordered by arrival.
    std::vector<OptShare> shares_of(ResourceId i) const {
        std::vector<OptShare> out;
        for (const auto& s : shares)
            if (s.resource == i && s.weight > 0.0) out.push_back(s);
        return out;
    }
};

namespace detail {

/// Turns an arrival -> resource assignment into capped shares.
inline OfflineResult result_from_assignment(const Instance& inst, const std::vector<std::optional<ResourceId>>& assign,
                                            OfflineKind kind, std::string method) {
    OfflineResult r;
    r.kind = kind;
    r.method = std::move(method);
    r.integral = true;
    const std::size_t n = inst.num_resources();
    r.perResource.assign(n, 0.0);
    for (std::size_t t = 1; t <= assign.size(); ++t) {
        if (!assign[t - 1]) continue;
        const ResourceId i = *assign[t - 1];
        const double b = inst.bid(i, t);
        if (!(b > 0.0)) continue;
        const double room = inst.budget(i) - r.perResource[i];
        if (room <= 0.0) continue;
        const double used = std::min(b, room);
        r.perResource[i] += used;
        r.shares.push_back({i, t, used == b ? 1.0 : used / b});
    }
    for (ResourceId i = 0; i < n; ++i) r.value += inst.reward(i) * r.perResource[i];
    r.upperBound = r.value;
    return r;
}

} // namespace detail

/// Checks that shares are feasible and recomputes OPT_i and the value.
inline bool validate_shares(const Instance& inst, const OfflineResult& r, double tol = 1e-9) {
    const std::size_t n = inst.num_resources();
    std::vector<double> used(n, 0.0), load(inst.num_arrivals() + 1, 0.0);
    for (const auto& s : r.shares) {
        if (s.resource >= n || s.arrival < 1 || s.arrival > inst.num_arrivals()) return false;
        if (s.weight < -tol || s.weight > 1.0 + tol) return false;
        used[s.resource] += s.weight * inst.bid(s.resource, s.arrival);
        load[s.arrival] += s.weight;
    }
    double value = 0.0;
    for (ResourceId i = 0; i < n; ++i) {
        if (used[i] > inst.budget(i) + tol * std::max(1.0, inst.budget(i))) return false;
        if (std::abs(used[i] - r.perResource[i]) > tol * std::max(1.0, used[i])) return false;
        value += inst.reward(i) * used[i];
    }
    for (double l : load)
        if (l > 1.0 + tol) return false;
    return std::abs(value - r.value) <= tol * std::max(1.0, value);
}

// ---------------------------------------------------------------------------
// LP

/// Dense tableau size above which solve_lp switches to the dual cutting-plane bound.
inline constexpr std::size_t kDenseLpCellLimit = 6'000'000;

/// Solves the LP with the dense simplex. Columns with zero objective are
/// dropped first (setting them to zero never hurts since all rows are <= with
/// nonnegative coefficients).
inline OfflineResult solve_lp_dense(const LpProblem& lp, double tol = 1e-8) {
    const std::size_t n = lp.numResources, T = lp.numArrivals;
    std::vector<std::size_t> cols;
    for (std::size_t k = 0; k < lp.num_variables(); ++k)
        if (lp.objective[k] > 0.0) cols.push_back(k);

    DenseSimplex s(n + T, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const std::size_t k = cols[c];
        s.set_objective(c, lp.objective[k]);
        s.set_coef(k % n, c, lp.bids[k]);
        s.set_coef(n + k / n, c, 1.0);
    }
    for (std::size_t i = 0; i < n; ++i) s.set_rhs(i, lp.budgets[i]);
    for (std::size_t t = 0; t < T; ++t) s.set_rhs(n + t, 1.0);
    const SimplexResult sr = s.solve(tol * 1e-1);

    OfflineResult r;
    r.kind = OfflineKind::Lp;
    r.method = "dense-simplex";
    r.value = sr.value;
    r.upperBound = sr.value;
    r.x.assign(lp.num_variables(), 0.0);
    for (std::size_t c = 0; c < cols.size(); ++c) r.x[cols[c]] = std::max(0.0, sr.x[c]);
    r.theta.assign(sr.duals.begin(), sr.duals.begin() + static_cast<std::ptrdiff_t>(n));
    r.lambda.assign(sr.duals.begin() + static_cast<std::ptrdiff_t>(n), sr.duals.end());
    r.basis = sr.basis;
    r.perResource.assign(n, 0.0);
    r.integral = true;
    for (std::size_t k = 0; k < lp.num_variables(); ++k) {
        const double x = r.x[k];
        if (x <= 1e-12) continue;
        const ResourceId i = k % n;
        const std::size_t t = k / n + 1;
        r.perResource[i] += x * lp.bids[k];
        r.shares.push_back({i, t, std::min(1.0, x)});
        if (std::abs(x - std::round(x)) > 1e-7) r.integral = false;
    }
    return r;
}

/// Arrivals grouped by identical bid vectors, in order of first appearance.
struct ArrivalTypes {
    std::vector<std::vector<std::size_t>> members; // 1-based arrival indices per type
    std::size_t size() const noexcept { return members.size(); }
};

inline ArrivalTypes arrival_types(const Instance& inst) {
    ArrivalTypes types;
    std::map<std::vector<double>, std::size_t> index;
    for (std::size_t t = 1; t <= inst.num_arrivals(); ++t) {
        const auto& b = inst.arrival(t).bids;
        auto [it, fresh] = index.try_emplace(b, types.members.size());
        if (fresh) types.members.emplace_back();
        types.members[it->second].push_back(t);
    }
    return types;
}

/// LP with one column per (resource, arrival type) and type rows sum_i x <= m_k.
/// Exact: any solution spreads over the type's arrivals with each at most 1, and
/// the type dual is a dual value for every member arrival.
inline OfflineResult solve_lp_aggregated(const Instance& inst, const ArrivalTypes& types, double tol = 1e-8) {
    const std::size_t n = inst.num_resources(), T = inst.num_arrivals(), K = types.size();
    struct Col {
        ResourceId i;
        std::size_t k;
    };
    std::vector<Col> cols;
    for (std::size_t k = 0; k < K; ++k)
        for (ResourceId i = 0; i < n; ++i)
            if (inst.reward(i) * inst.bid(i, types.members[k].front()) > 0.0) cols.push_back({i, k});

    DenseSimplex s(n + K, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const double b = inst.bid(cols[c].i, types.members[cols[c].k].front());
        s.set_objective(c, inst.reward(cols[c].i) * b);
        s.set_coef(cols[c].i, c, b);
        s.set_coef(n + cols[c].k, c, 1.0);
    }
    for (ResourceId i = 0; i < n; ++i) s.set_rhs(i, inst.budget(i));
    for (std::size_t k = 0; k < K; ++k) s.set_rhs(n + k, static_cast<double>(types.members[k].size()));
    const SimplexResult sr = s.solve(tol * 1e-1);

    OfflineResult r;
    r.kind = OfflineKind::Lp;
    r.method = "aggregated-simplex";
    r.value = sr.value;
    r.upperBound = sr.value;
    r.theta.assign(sr.duals.begin(), sr.duals.begin() + static_cast<std::ptrdiff_t>(n));
    r.lambda.assign(T, 0.0);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t t : types.members[k]) r.lambda[t - 1] = sr.duals[n + k];
    r.x.assign(n * T, 0.0);
    // Pour each type's column values over its arrivals, filling one arrival at a time.
    std::vector<std::size_t> cursor(K, 0);
    std::vector<double> room(T, 1.0);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        double left = std::max(0.0, sr.x[c]);
        const auto& mem = types.members[cols[c].k];
        std::size_t& at = cursor[cols[c].k];
        while (left > 1e-12 && at < mem.size()) {
            const std::size_t t = mem[at];
            const double put = std::min(left, room[t - 1]);
            r.x[(t - 1) * n + cols[c].i] += put;
            room[t - 1] -= put;
            left -= put;
            if (room[t - 1] <= 1e-12) ++at;
        }
    }
    r.perResource.assign(n, 0.0);
    r.integral = true;
    for (std::size_t k = 0; k < r.x.size(); ++k) {
        const double x = r.x[k];
        if (x <= 1e-12) continue;
        const ResourceId i = k % n;
        const std::size_t t = k / n + 1;
        r.perResource[i] += x * inst.bid(i, t);
        r.shares.push_back({i, t, std::min(1.0, x)});
        if (std::abs(x - std::round(x)) > 1e-7) r.integral = false;
    }
    return r;
}

/// Lagrangian dual of the LP: min over 0 <= theta <= r of
///   h(theta) = sum_i B_i theta_i + sum_t max(0, max_i b_it (r_i - theta_i)).
/// Minimized by Kelley's cutting planes with the dense simplex as master. The
/// returned value is the best h found, an upper bound on the LP optimum, and
/// the gap to the master's lower bound is below `tol` (relative).
inline OfflineResult solve_lp_dual_bound(const Instance& inst, double tol = 1e-8, std::size_t maxCuts = 2000) {
    const std::size_t n = inst.num_resources(), T = inst.num_arrivals();
    std::vector<double> r(n), B(n);
    for (ResourceId i = 0; i < n; ++i) {
        r[i] = inst.reward(i);
        B[i] = inst.budget(i);
    }
    auto evaluate = [&](const std::vector<double>& th, std::vector<double>& grad) {
        double h = 0.0;
        grad.assign(n, 0.0);
        for (ResourceId i = 0; i < n; ++i) {
            h += B[i] * th[i];
            grad[i] = B[i];
        }
        for (std::size_t t = 1; t <= T; ++t) {
            const auto& b = inst.arrival(t).bids;
            double best = 0.0;
            std::size_t arg = n;
            for (ResourceId i = 0; i < n; ++i) {
                const double v = b[i] * (r[i] - th[i]);
                if (v > best) {
                    best = v;
                    arg = i;
                }
            }
            h += best;
            if (arg < n) grad[arg] -= b[arg];
        }
        return h;
    };

    // Upper bound on the arrival term, used to shift the master to a feasible origin.
    double zmax = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
        double best = 0.0;
        for (ResourceId i = 0; i < n; ++i) best = std::max(best, inst.bid(i, t) * r[i]);
        zmax += best;
    }

    struct Cut {
        std::vector<double> g; // gradient of the arrival term
        double c;              // intercept of the arrival term
    };
    std::vector<Cut> cuts;
    std::vector<double> theta(n, 0.0), grad, bestTheta = theta;
    double best = kInf, lower = -kInf;

    for (std::size_t it = 0; it < maxCuts; ++it) {
        const double h = evaluate(theta, grad);
        if (h < best) {
            best = h;
            bestTheta = theta;
        }
        Cut cut;
        cut.g.resize(n);
        double lin = 0.0;
        for (ResourceId i = 0; i < n; ++i) {
            cut.g[i] = grad[i] - B[i];
            lin += cut.g[i] * theta[i];
        }
        cut.c = (h - std::inner_product(B.begin(), B.end(), theta.begin(), 0.0)) - lin;
        cuts.push_back(std::move(cut));

        // Master over (theta, s) with z = zmax - s:  max s - B.theta
        //   s - g_k.theta <= zmax - c_k,   theta_i <= r_i,   s <= zmax.
        const std::size_t m = cuts.size() + n + 1;
        DenseSimplex ms(m, n + 1);
        for (ResourceId i = 0; i < n; ++i) ms.set_objective(i, -B[i]);
        ms.set_objective(n, 1.0);
        for (std::size_t k = 0; k < cuts.size(); ++k) {
            for (ResourceId i = 0; i < n; ++i) ms.set_coef(k, i, cuts[k].g[i]);
            ms.set_coef(k, n, 1.0);
            ms.set_rhs(k, std::max(0.0, zmax - cuts[k].c));
        }
        for (ResourceId i = 0; i < n; ++i) {
            ms.set_coef(cuts.size() + i, i, 1.0);
            ms.set_rhs(cuts.size() + i, r[i]);
        }
        ms.set_coef(m - 1, n, 1.0);
        ms.set_rhs(m - 1, zmax);
        const SimplexResult sr = ms.solve(1e-12);
        lower = zmax - sr.value;
        for (ResourceId i = 0; i < n; ++i) theta[i] = std::clamp(sr.x[i], 0.0, r[i]);
        if (best - lower <= tol * std::max(1.0, std::abs(best))) break;
    }
    if (best - lower > 1e-6 * std::max(1.0, std::abs(best)))
        throw LpIterationError("dual cutting-plane bound did not converge: gap " + std::to_string(best - lower), {});

    OfflineResult res;
    res.kind = OfflineKind::Lp;
    res.method = "dual-cutting-plane";
    res.value = best;
    res.upperBound = best;
    res.theta = bestTheta;
    return res;
}

inline OfflineResult solve_lp(const LpProblem& lp, double tol = 1e-8) { return solve_lp_dense(lp, tol); }

// ---------------------------------------------------------------------------
// Brute force

/// Exact integral optimum by enumerating assignments (resource or none per
/// arrival) with branch-and-bound pruning. Throws when the search space exceeds `cap`.
inline OfflineResult solve_bruteforce(const Instance& inst, double cap = 1e6) {
    const std::size_t n = inst.num_resources(), T = inst.num_arrivals();
    std::vector<std::vector<ResourceId>> options(T);
    double space = 1.0;
    for (std::size_t t = 1; t <= T; ++t) {
        for (ResourceId i = 0; i < n; ++i)
            if (inst.bid(i, t) > 0.0 && inst.reward(i) > 0.0) options[t - 1].push_back(i);
        space *= static_cast<double>(options[t - 1].size() + 1);
        if (space > cap)
            throw PreconditionError("instance too large for brute force (search space exceeds " +
                                    std::to_string(static_cast<long long>(cap)) + ")");
    }
    // Optimistic remainder: best uncapped gain of every later arrival.
    std::vector<double> tail(T + 1, 0.0);
    for (std::size_t t = T; t-- > 0;) {
        double m = 0.0;
        for (ResourceId i : options[t]) m = std::max(m, inst.reward(i) * inst.bid(i, t + 1));
        tail[t] = tail[t + 1] + m;
    }

    std::vector<double> load(n, 0.0);
    std::vector<std::optional<ResourceId>> cur(T), bestAssign(T);
    double best = -1.0;
    auto dfs = [&](auto&& self, std::size_t t, double cur_value) -> void {
        if (cur_value + tail[t] <= best) return;
        if (t == T) {
            best = cur_value;
            bestAssign = cur;
            return;
        }
        for (ResourceId i : options[t]) {
            const double before = inst.reward(i) * std::min(inst.budget(i), load[i]);
            load[i] += inst.bid(i, t + 1);
            const double after = inst.reward(i) * std::min(inst.budget(i), load[i]);
            cur[t] = i;
            self(self, t + 1, cur_value + after - before);
            load[i] -= inst.bid(i, t + 1);
        }
        cur[t].reset();
        self(self, t + 1, cur_value);
    };
    dfs(dfs, 0, 0.0);
    return detail::result_from_assignment(inst, bestAssign, OfflineKind::Bruteforce, "enumeration");
}

// ---------------------------------------------------------------------------
// Analytic optima of the constructed instances

namespace detail {

inline std::optional<std::size_t> label_param(const std::string& label, const std::string& prefix) {
    const std::regex re("^" + prefix + R"(\(n=(\d+)[,)])");
    std::smatch m;
    if (!std::regex_search(label, m, re)) return std::nullopt;
    return static_cast<std::size_t>(std::stoull(m[1].str()));
}

} // namespace detail

/// Closed-form optimum for instances produced by the named generators; the
/// witnessing assignment is validated against the instance, so a relabeled or
/// edited file yields none rather than a wrong value.
inline std::optional<OfflineResult> analytic_opt(const Instance& inst) {
    const std::string& label = inst.label();
    const std::size_t n = inst.num_resources(), T = inst.num_arrivals();
    std::vector<std::optional<ResourceId>> assign(T);
    double expected = 0.0;
    std::string method;

    if (auto k = detail::label_param(label, "adversary")) {
        // Resource with the big capacity takes every phase 1..n-1 arrival; phase n
        // fills labels 1..n-1 to capacity.
        const std::size_t nn = *k;
        if (nn != n) return std::nullopt;
        const std::size_t early = (nn - 1) * (nn + 2) / 2;
        if (T != early + nn * (nn - 1) / 2) return std::nullopt;
        ResourceId big = 0;
        for (ResourceId i = 1; i < n; ++i)
            if (inst.budget(i) > inst.budget(big)) big = i;
        for (std::size_t t = 1; t <= early; ++t) assign[t - 1] = big;
        std::vector<ResourceId> order;
        for (ResourceId i = 0; i < n; ++i)
            if (i != big) order.push_back(i);
        std::size_t t = early + 1;
        for (ResourceId i : order)
            for (double c = 0.0; c < inst.budget(i) && t <= T; c += 1.0) assign[(t++) - 1] = i;
        expected = static_cast<double>(nn * nn - 1);
        method = "adversary";
    } else if (auto k3 = detail::label_param(label, "example3")) {
        const std::size_t m = *k3;
        if (n != 3 || T != 2 * m) return std::nullopt;
        for (std::size_t t = 1; t <= T; ++t) assign[t - 1] = t <= m ? 0 : 1;
        expected = 2.0 * static_cast<double>(m);
        method = "example3";
    } else if (auto k2 = detail::label_param(label, "example2")) {
        const std::size_t m = *k2;
        if (n != m || T != 3 * (m - 1)) return std::nullopt;
        for (std::size_t j = 0; j + 1 < m; ++j) {
            assign[j] = j;
            assign[(m - 1) + j] = j;
            assign[2 * (m - 1) + j] = m - 1;
        }
        expected = 0.0;
        for (ResourceId i = 0; i < n; ++i) expected += inst.reward(i) * inst.budget(i);
        method = "example2";
    } else if (label == "example1") {
        if (n != 3 || T != 4) return std::nullopt;
        assign = {ResourceId{1}, ResourceId{2}, ResourceId{1}, ResourceId{0}};
        expected = 68.0;
        method = "example1";
    } else {
        return std::nullopt;
    }

    OfflineResult r = detail::result_from_assignment(inst, assign, OfflineKind::Analytic, method);
    if (std::abs(r.value - expected) > 1e-9 * std::max(1.0, expected)) return std::nullopt;
    return r;
}

/// Trivial LP upper bounds: total budget value and total best bid.
inline double lp_trivial_bound(const Instance& inst) {
    double budgetSide = 0.0, bidSide = 0.0;
    for (ResourceId i = 0; i < inst.num_resources(); ++i) budgetSide += inst.reward(i) * inst.budget(i);
    for (std::size_t t = 1; t <= inst.num_arrivals(); ++t) {
        double m = 0.0;
        for (ResourceId i = 0; i < inst.num_resources(); ++i) m = std::max(m, inst.reward(i) * inst.bid(i, t));
        bidSide += m;
    }
    return std::min(budgetSide, bidSide);
}

/// LP optimum of an instance, choosing the cheapest exact route: an analytic
/// witness that meets a trivial upper bound, the simplex on merged identical
/// arrivals or on the full LP when the tableau is small enough, else the dual
/// cutting-plane bound.
inline OfflineResult lp_benchmark(const Instance& inst, double tol = 1e-8) {
    if (auto a = analytic_opt(inst)) {
        if (std::abs(a->value - lp_trivial_bound(inst)) <= 1e-12 * std::max(1.0, a->value)) {
            a->kind = OfflineKind::Lp;
            a->method = "analytic-tight";
            return *a;
        }
    }
    const LpProblem lp = build_lp(inst);
    std::size_t cols = 0;
    for (double c : lp.objective) cols += c > 0.0;
    const ArrivalTypes types = arrival_types(inst);
    if (types.size() < inst.num_arrivals()) {
        const std::size_t rows = inst.num_resources() + types.size();
        const std::size_t aggCols = types.size() * inst.num_resources();
        if ((rows + 1) * (aggCols + rows + 1) <= kDenseLpCellLimit) return solve_lp_aggregated(inst, types, tol);
    }
    const std::size_t cells = (lp.num_rows() + 1) * (cols + lp.num_rows() + 1);
    if (cells <= kDenseLpCellLimit) return solve_lp_dense(lp, tol);
    return solve_lp_dual_bound(inst, tol);
}

/// Offline comparator with per-resource shares for the certificate checks:
/// analytic, else brute force when small, else the dense LP solution.
inline OfflineResult opt_with_shares(const Instance& inst) {
    if (auto a = analytic_opt(inst)) return *a;
    try {
        return solve_bruteforce(inst, 2e5);
    } catch (const PreconditionError&) {
    }
    return solve_lp_dense(build_lp(inst));
}

} // namespace adwords
