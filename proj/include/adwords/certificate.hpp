#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fractional.hpp"
#include "generators.hpp"
#include "numerics.hpp"
#include "offline.hpp"
#include "policies.hpp"
#include "rng.hpp"

namespace adwords {

// ---------------------------------------------------------------------------
// Reports

struct Violation {
    std::string check;
    ResourceId resource = 0;
    double y = 0.0;
    double tau = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string detail;
};

/// Outcome of one family of inequalities. Only the first few violations are kept.
struct CheckReport {
    static constexpr std::size_t kStored = 50;

    std::string name;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
    std::size_t violationCount = 0;
    double minSlack = kInf;
    std::vector<Violation> violations;

    CheckReport() = default;
    explicit CheckReport(std::string n) : name(std::move(n)) {}

    bool ok() const noexcept { return violationCount == 0; }

    /// Records lhs >= rhs - tol.
    void require(double lhs, double rhs, double tol, const Violation& where) {
        ++evaluated;
        minSlack = std::min(minSlack, lhs - rhs);
        if (lhs >= rhs - tol) return;
        ++violationCount;
        if (violations.size() < kStored) {
            Violation v = where;
            v.check = name;
            v.lhs = lhs;
            v.rhs = rhs;
            violations.push_back(std::move(v));
        }
    }

    void merge(const CheckReport& o) {
        evaluated += o.evaluated;
        skipped += o.skipped;
        violationCount += o.violationCount;
        minSlack = std::min(minSlack, o.minSlack);
        for (const auto& v : o.violations)
            if (violations.size() < kStored) violations.push_back(v);
    }
};

inline nlohmann::ordered_json to_json(const Violation& v) {
    nlohmann::ordered_json j;
    j["check"] = v.check;
    j["resource"] = v.resource;
    j["y"] = v.y;
    j["tau"] = v.tau;
    j["lhs"] = v.lhs;
    j["rhs"] = v.rhs;
    if (!v.detail.empty()) j["detail"] = v.detail;
    return j;
}

inline nlohmann::ordered_json to_json(const CheckReport& r) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["evaluated"] = r.evaluated;
    j["skipped"] = r.skipped;
    j["violations"] = r.violationCount;
    j["minSlack"] = std::isfinite(r.minSlack) ? nlohmann::ordered_json(r.minSlack) : nlohmann::ordered_json(nullptr);
    auto& list = j["violationList"] = nlohmann::ordered_json::array();
    for (const auto& v : r.violations) list.push_back(to_json(v));
    return j;
}

inline std::string opt_source_label(const OfflineResult& r) { return to_string(r.kind) + ":" + r.method; }

// ---------------------------------------------------------------------------
// Critical thresholds

/// Solves b r (1 - g(y)) = M for y, with the clamps: 0 when no solution in
/// [0, 1], 1 when the competing price is zero.
inline double critical_threshold(double bidTimesReward, double competitor, double beta) {
    if (!(competitor > 0.0)) return 1.0;
    if (!(bidTimesReward > competitor)) return 0.0;
    const double y = 1.0 + std::log1p(-competitor / bidTimesReward) / beta;
    return std::clamp(y, 0.0, 1.0);
}

/// A piece of OPT_i's moments over which the y_i = 1 run is constant.
struct CriticalPiece {
    std::size_t arrival = 0;
    double tau1 = 0.0, tau2 = 0.0;
    double bid = 0.0;        // b_it
    double competitor = 0.0; // lambda_tau(1)
    std::optional<ResourceId> competitorId;
    double threshold = 0.0;  // y^c_i(tau)

    double length() const { return tau2 - tau1; }
    double weight() const { return bid * length(); }
};

/// The moments of OPT_i are [t, t + w_t) for each arrival t it receives with
/// weight w_t; for integral comparators w_t = 1 except a possible partial last one.
struct CriticalProfile {
    ResourceId resource = 0;
    double reward = 1.0;
    double beta = kDefaultBeta;
    SeedVector seeds;            // y_i = 1
    FractionalAllocation base;   // f-ALG(1)
    std::vector<CriticalPiece> pieces;
    std::vector<double> V;       // ascending
    std::vector<double> b;       // b(v), aligned with V
    double optI = 0.0;

    /// B(y) = sum_{v >= y} b(v).
    double B(double y) const {
        double s = 0.0;
        for (std::size_t k = 0; k < V.size(); ++k)
            if (V[k] >= y) s += b[k];
        return s;
    }

    /// S(y): moments of OPT_i with threshold at least y.
    std::vector<CriticalPiece> S(double y) const {
        std::vector<CriticalPiece> out;
        for (const auto& p : pieces)
            if (p.threshold >= y) out.push_back(p);
        return out;
    }

    double S_measure(double y) const {
        double s = 0.0;
        for (const auto& p : pieces)
            if (p.threshold >= y) s += p.weight();
        return s;
    }

    double sum_b() const {
        double s = 0.0;
        for (double x : b) s += x;
        return s;
    }
};

/// Builds the threshold profile of resource i against the comparator's shares.
inline CriticalProfile critical_profile(const Instance& inst, ResourceId i, const SeedVector& Y,
                                        const std::vector<OptShare>& optShares, double beta,
                                        TieBreak tb = TieBreak::LowestId) {
    require_seed_length(inst, Y);
    CriticalProfile p;
    p.resource = i;
    p.reward = inst.reward(i);
    p.beta = beta;
    p.seeds = Y.with(i, 1.0);
    p.base = run_fgpg(inst, p.seeds, beta, tb);

    std::map<double, double> weights;
    for (const auto& sh : optShares) {
        if (sh.resource != i || !(sh.weight > 0.0)) continue;
        const std::size_t t = sh.arrival;
        const double br = inst.bid(i, t) * p.reward;
        const double lo = static_cast<double>(t);
        const double hi = lo + std::min(1.0, sh.weight);
        double cursor = lo;
        auto emit = [&](double a, double c, double price, std::optional<ResourceId> who) {
            const double x = std::max(a, lo), z = std::min(c, hi);
            if (!(z > x)) return;
            CriticalPiece piece;
            piece.arrival = t;
            piece.tau1 = x;
            piece.tau2 = z;
            piece.bid = inst.bid(i, t);
            piece.competitor = price;
            piece.competitorId = who;
            piece.threshold = critical_threshold(br, price, beta);
            weights[piece.threshold] += piece.weight();
            p.pieces.push_back(piece);
        };
        for (const auto& s : p.base.segments_of(t)) {
            emit(cursor, s.tau1, 0.0, std::nullopt); // gaps cannot occur, kept for safety
            emit(s.tau1, s.tau2, s.price, s.resource);
            cursor = s.tau2;
        }
        emit(cursor, lo + 1.0, 0.0, std::nullopt);
        p.optI += inst.bid(i, t) * std::min(1.0, sh.weight);
    }
    for (const auto& [v, w] : weights) {
        p.V.push_back(v);
        p.b.push_back(w);
    }
    return p;
}

/// 201 uniform points plus every threshold value; `below` adds v - delta points.
inline std::vector<double> default_y_grid(const CriticalProfile& p, std::size_t uniform = 201,
                                          bool below = false, double delta = 1e-7) {
    std::vector<double> g;
    for (std::size_t k = 0; k < uniform; ++k)
        g.push_back(k + 1 == uniform ? 1.0 : static_cast<double>(k) / static_cast<double>(uniform - 1));
    for (double v : p.V) {
        g.push_back(v);
        if (below && v - delta >= 0.0) g.push_back(v - delta);
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

// ---------------------------------------------------------------------------
// Pathwise lemma checks

struct LemmaOptions {
    bool lambda = true;
    bool caseBound = true;
    bool alglbl = true;
    bool decomposable = false;
    TieBreak tieBreak = TieBreak::LowestId;
    double tol = kCheckTol;
    double minInterval = 1e-9; // elementary intervals shorter than this are measure-negligible
};

struct LemmaReport {
    CheckReport lambda{"lambda-monotone"};
    CheckReport caseBound{"case-bound"};
    CheckReport alglbl{"alg-lower-bound"};
    CheckReport decomposable{"decomposable"};

    void merge(const LemmaReport& o) {
        lambda.merge(o.lambda);
        caseBound.merge(o.caseBound);
        alglbl.merge(o.alglbl);
        decomposable.merge(o.decomposable);
    }
    bool ok() const { return lambda.ok() && caseBound.ok() && alglbl.ok() && decomposable.ok(); }
};

namespace detail {

/// Price of the segment covering tau within arrival t (0 when idle).
inline double price_in(const FractionalAllocation& f, std::size_t t, double tau) {
    for (const auto& s : f.segments_of(t))
        if (tau >= s.tau1 && tau < s.tau2) return s.price;
    return 0.0;
}

/// Integral of lambda_tau over [lo, hi) within arrival t.
inline double lambda_integral(const FractionalAllocation& f, std::size_t t, double lo, double hi) {
    double s = 0.0;
    for (const auto& seg : f.segments_of(t)) {
        const double a = std::max(lo, seg.tau1), b = std::min(hi, seg.tau2);
        if (b > a) s += seg.price * (b - a);
    }
    return s;
}

} // namespace detail

/// Runs the requested checks for resource i at every y in `grid`, sharing one
/// fractional run per grid point.
inline LemmaReport run_lemma_checks(const Instance& inst, const CriticalProfile& prof, const SeedVector& Y,
                                    const std::vector<double>& grid, const LemmaOptions& opt = {}) {
    const ResourceId i = prof.resource;
    const std::size_t n = inst.num_resources();
    const double r = prof.reward;
    const TradeoffFunction g(prof.beta);
    const FractionalAllocation& base = prof.base;
    const double scale = std::max({1.0, r * inst.budget(i), r * prof.optI, base.total});
    const double tol = opt.tol * scale;
    const double lambdaNet1 = base.lambda_net();

    if (opt.decomposable && !is_decomposable(inst))
        throw PreconditionError("check_decomposable requires decomposable bids");

    LemmaReport rep;
    std::vector<double> cuts;
    for (double y : grid) {
        const SeedVector Yy = Y.with(i, y);
        const FractionalAllocation f = run_fgpg(inst, Yy, prof.beta, opt.tieBreak);
        const double fa = f.consumed[i];
        const double gy = g(y);

        if (opt.lambda) {
            for (std::size_t t = 1; t <= inst.num_arrivals(); ++t) {
                cuts.clear();
                cuts.push_back(static_cast<double>(t));
                cuts.push_back(static_cast<double>(t) + 1.0);
                for (const auto& s : base.segments_of(t)) cuts.insert(cuts.end(), {s.tau1, s.tau2});
                for (const auto& s : f.segments_of(t)) cuts.insert(cuts.end(), {s.tau1, s.tau2});
                std::sort(cuts.begin(), cuts.end());
                const double br = inst.bid(i, t) * r;
                for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                    const double a = cuts[k], c = cuts[k + 1];
                    if (c - a < opt.minInterval) continue;
                    const double mid = 0.5 * (a + c);
                    const double ly = detail::price_in(f, t, mid);
                    const double l1 = detail::price_in(base, t, mid);
                    const double lowBound = br * g.complement(critical_threshold(br, l1, prof.beta));
                    Violation w{"", i, y, mid, 0, 0, ""};
                    rep.lambda.require(ly, l1, tol, w);
                    w.detail = "lambda(1) vs threshold bound";
                    rep.lambda.require(l1, lowBound, tol, w);
                }
            }
            // I(tau,1) \ {i} within I(tau,y): availability ends at the exhaustion time.
            for (ResourceId j = 0; j < n; ++j) {
                if (j == i) continue;
                Violation w{"", i, y, f.exhaustTime[j], 0, 0, "availability containment, j=" + std::to_string(j)};
                const double e1 = base.exhaustTime[j], ey = f.exhaustTime[j];
                const double lhs = std::isinf(ey) ? 1.0 : (std::isinf(e1) ? 0.0 : ey - e1 + 1.0);
                rep.lambda.require(lhs, 1.0, opt.minInterval, w);
            }
        }

        // Integral of lambda over OPT_i's moments.
        double lamOpt = 0.0;
        for (const auto& pc : prof.pieces) lamOpt += detail::lambda_integral(f, pc.arrival, pc.tau1, pc.tau2);
        const double theta = fa * r * gy;

        if (opt.caseBound) {
            double rhs = 0.0;
            for (std::size_t k = 0; k < prof.V.size(); ++k) {
                const double v = prof.V[k];
                double term = g.complement(v);
                if (y <= v) term += integrand(y, v, prof.beta);
                rhs += prof.b[k] * term;
            }
            rep.caseBound.require(lamOpt + theta, r * rhs, tol, Violation{"", i, y, 0, 0, 0, ""});
        }

        const double By = prof.B(y);
        if (opt.alglbl) {
            // Side claim, unconditional: f-ALG_j(y) <= f-ALG_j(1) for j != i.
            for (ResourceId j = 0; j < n; ++j) {
                if (j == i) continue;
                rep.alglbl.require(base.consumed[j], f.consumed[j], tol,
                                   Violation{"", i, y, 0, 0, 0, "f-ALG_j(y) <= f-ALG_j(1), j=" + std::to_string(j)});
            }
            if (fa < By - tol && y < 1.0) {
                double bound = 0.0, lowerDiff = 0.0;
                for (std::size_t k = 0; k < prof.V.size(); ++k) {
                    if (prof.V[k] < y) continue;
                    const double gv = g(prof.V[k]);
                    bound += prof.b[k] * (gv - gy) / g.complement(y);
                    lowerDiff += prof.b[k] * (gv - gy);
                }
                rep.alglbl.require(fa, bound, tol, Violation{"", i, y, 0, 0, 0, "Case II bound"});
                const double diff = f.lambda_net() - lambdaNet1;
                rep.alglbl.require(r * fa * g.complement(y), diff, tol,
                                   Violation{"", i, y, 0, 0, 0, "sandwich upper"});
                rep.alglbl.require(diff, r * lowerDiff, tol, Violation{"", i, y, 0, 0, 0, "sandwich lower"});
            } else {
                ++rep.alglbl.skipped;
            }
        }

        if (opt.decomposable) {
            if (y >= 1.0) {
                ++rep.decomposable.skipped;
            } else {
                // Moments whose threshold equals y exactly are ties of measure zero in y.
                double Bs = 0.0;
                const double band = 1e-12;
                for (std::size_t k = 0; k < prof.V.size(); ++k)
                    if (prof.V[k] > y + band) Bs += prof.b[k];
                rep.decomposable.require(fa, Bs, tol, Violation{"", i, y, 0, 0, 0, ""});
            }
        }
    }
    return rep;
}

/// Pathwise lambda bound: lambda_tau(y) >= lambda_tau(1) >= b r (1 - g(y^c)) and the
/// availability containment, for every y in the grid.
inline CheckReport check_lambda_monotone(const Instance& inst, const CriticalProfile& prof, const SeedVector& Y,
                                         const std::vector<double>& grid, TieBreak tb = TieBreak::LowestId) {
    LemmaOptions o;
    o.caseBound = o.alglbl = false;
    o.tieBreak = tb;
    return run_lemma_checks(inst, prof, Y, grid, o).lambda;
}

inline CheckReport check_case_bound(const Instance& inst, const CriticalProfile& prof, const SeedVector& Y,
                                    const std::vector<double>& grid, TieBreak tb = TieBreak::LowestId) {
    LemmaOptions o;
    o.lambda = o.alglbl = false;
    o.tieBreak = tb;
    return run_lemma_checks(inst, prof, Y, grid, o).caseBound;
}

inline CheckReport check_alglbl(const Instance& inst, const CriticalProfile& prof, const SeedVector& Y,
                                const std::vector<double>& grid, TieBreak tb = TieBreak::LowestId) {
    LemmaOptions o;
    o.lambda = o.caseBound = false;
    o.tieBreak = tb;
    return run_lemma_checks(inst, prof, Y, grid, o).alglbl;
}

/// f-ALG_i(y) >= B(y) for y in [0, 1). Precondition: decomposable bids.
inline CheckReport check_decomposable(const Instance& inst, const CriticalProfile& prof, const SeedVector& Y,
                                      const std::vector<double>& grid, TieBreak tb = TieBreak::LowestId) {
    LemmaOptions o;
    o.lambda = o.caseBound = o.alglbl = false;
    o.decomposable = true;
    o.tieBreak = tb;
    return run_lemma_checks(inst, prof, Y, grid, o).decomposable;
}

/// Same claim without the precondition, for documenting failures on general bids.
inline CheckReport probe_budget_claim(const Instance& inst, const CriticalProfile& prof, const SeedVector& Y,
                                      const std::vector<double>& grid, TieBreak tb = TieBreak::LowestId) {
    CheckReport rep("budget-claim-probe");
    const double tol = kCheckTol * std::max(1.0, prof.optI);
    for (double y : grid) {
        if (y >= 1.0) continue;
        const auto f = run_fgpg(inst, Y.with(prof.resource, y), prof.beta, tb);
        double Bs = 0.0;
        for (std::size_t k = 0; k < prof.V.size(); ++k)
            if (prof.V[k] > y + 1e-12) Bs += prof.b[k];
        rep.require(f.consumed[prof.resource], Bs, tol, Violation{"", prof.resource, y, 0, 0, 0, ""});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Monte-Carlo LP-free certificate

struct DualCertificate {
    double beta = kDefaultBeta;
    double alpha = 0.0;
    std::size_t trials = 0;
    std::string optSource;
    std::vector<double> lambdaPerArrival, lambdaSE; // E_Y[int_t^{t+1} lambda_tau(Y)]
    std::vector<double> theta, thetaSE;             // E_Y[theta_i(Y)]
    std::vector<double> coverage, coverageSE;       // E_Y[int_{OPT_i} lambda + theta_i]
    std::vector<double> optI;
    std::vector<double> rewards;
    double falg = 0.0, falgSE = 0.0;
    double maxIdentityResidual = 0.0; // per seed |sum lambda + sum theta - f-ALG|
    double minLambda = kInf, minTheta = kInf;

    /// coverage_i - alpha r_i OPT_i.
    double slack(ResourceId i, double a) const { return coverage[i] - a * rewards[i] * optI[i]; }
};

namespace detail {

struct Moments {
    double sum = 0.0, sumSq = 0.0;
    void add(double x) {
        sum += x;
        sumSq += x * x;
    }
    double mean(std::size_t n) const { return sum / static_cast<double>(n); }
    double se(std::size_t n) const {
        if (n < 2) return 0.0;
        const double m = mean(n);
        const double var = std::max(0.0, (sumSq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
        return std::sqrt(var / static_cast<double>(n));
    }
};

} // namespace detail

inline DualCertificate build_certificate(const Instance& inst, const OfflineResult& opt, double beta,
                                         std::size_t trials, std::uint64_t rngSeed, double alpha = 0.0,
                                         TieBreak tb = TieBreak::LowestId) {
    if (trials == 0) throw PreconditionError("build_certificate requires trials >= 1");
    const std::size_t n = inst.num_resources(), T = inst.num_arrivals();
    const TradeoffFunction g(beta);
    const CounterRng rng(rngSeed);

    DualCertificate c;
    c.beta = beta;
    c.alpha = alpha;
    c.trials = trials;
    c.optSource = opt_source_label(opt);
    c.optI.assign(n, 0.0);
    c.rewards.resize(n);
    for (ResourceId i = 0; i < n; ++i) c.rewards[i] = inst.reward(i);
    std::vector<std::vector<OptShare>> shares(n);
    for (const auto& s : opt.shares)
        if (s.weight > 0.0) {
            shares[s.resource].push_back(s);
            c.optI[s.resource] += s.weight * inst.bid(s.resource, s.arrival);
        }

    std::vector<detail::Moments> lam(T), th(n), cov(n);
    detail::Moments total;
    for (std::size_t k = 0; k < trials; ++k) {
        const SeedVector Y = rng.seeds(k, n);
        const FractionalAllocation f = run_fgpg(inst, Y, beta, tb);
        double sumLam = 0.0, sumTheta = 0.0;
        for (std::size_t t = 1; t <= T; ++t) {
            const double l = f.lambda_arrival(t);
            lam[t - 1].add(l);
            sumLam += l;
            c.minLambda = std::min(c.minLambda, l);
        }
        for (ResourceId i = 0; i < n; ++i) {
            const double thi = f.consumed[i] * inst.reward(i) * g(Y[i]);
            th[i].add(thi);
            sumTheta += thi;
            c.minTheta = std::min(c.minTheta, thi);
            double q = thi;
            for (const auto& s : shares[i])
                q += detail::lambda_integral(f, s.arrival, static_cast<double>(s.arrival),
                                             static_cast<double>(s.arrival) + std::min(1.0, s.weight));
            cov[i].add(q);
        }
        c.maxIdentityResidual = std::max(c.maxIdentityResidual, std::abs(sumLam + sumTheta - f.total));
        total.add(f.total);
    }
    for (std::size_t t = 0; t < T; ++t) {
        c.lambdaPerArrival.push_back(lam[t].mean(trials));
        c.lambdaSE.push_back(lam[t].se(trials));
    }
    for (ResourceId i = 0; i < n; ++i) {
        c.theta.push_back(th[i].mean(trials));
        c.thetaSE.push_back(th[i].se(trials));
        c.coverage.push_back(cov[i].mean(trials));
        c.coverageSE.push_back(cov[i].se(trials));
    }
    c.falg = total.mean(trials);
    c.falgSE = total.se(trials);
    return c;
}

inline nlohmann::ordered_json to_json(const DualCertificate& c) {
    nlohmann::ordered_json j;
    j["beta"] = c.beta;
    j["alpha"] = c.alpha;
    j["trials"] = c.trials;
    j["optSource"] = c.optSource;
    j["falg"] = c.falg;
    j["falgSE"] = c.falgSE;
    j["maxIdentityResidual"] = c.maxIdentityResidual;
    j["lambda"] = c.lambdaPerArrival;
    j["lambdaSE"] = c.lambdaSE;
    j["theta"] = c.theta;
    j["thetaSE"] = c.thetaSE;
    j["coverage"] = c.coverage;
    j["coverageSE"] = c.coverageSE;
    j["optI"] = c.optI;
    std::vector<double> slack;
    for (ResourceId i = 0; i < c.coverage.size(); ++i) slack.push_back(c.slack(i, c.alpha));
    j["coverageSlack"] = slack;
    return j;
}

/// One CSV row per (instance, beta, trials).
inline void write_certificate_csv_header(std::ostream& os) {
    os << "instance,beta,trials,opt_source,falg,falg_se,min_coverage_slack,max_identity_residual\n";
}

inline void write_certificate_csv_row(std::ostream& os, const std::string& instance, const DualCertificate& c) {
    double minSlack = kInf;
    for (ResourceId i = 0; i < c.coverage.size(); ++i) minSlack = std::min(minSlack, c.slack(i, c.alpha));
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.6f,%zu,", c.beta, c.trials);
    os << std::quoted(instance) << ',' << buf << std::quoted(c.optSource) << ',';
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", c.falg, c.falgSE, minSlack, c.maxIdentityResidual);
    os << buf;
}

// ---------------------------------------------------------------------------
// Budget augmentation coupling

struct AugmentationReport {
    CheckReport perResource{"eq11-per-resource"};
    CheckReport total{"eq10-total"};
    CheckReport zDominance{"z-dominance"};
    double alg = 0.0;
    double falgAug = 0.0;
    double gamma = 0.0;

    bool ok() const { return perResource.ok() && total.ok() && zDominance.ok(); }
    void merge(const AugmentationReport& o) {
        perResource.merge(o.perResource);
        total.merge(o.total);
        zDominance.merge(o.zDominance);
    }
};

inline Instance augment_budgets(const Instance& inst) {
    std::vector<double> b(inst.num_resources());
    for (ResourceId i = 0; i < b.size(); ++i) b[i] = inst.budget(i) + inst.max_bid(i);
    return inst.with_budgets(std::move(b), inst.label() + "+augmented");
}

/// ALG on the original instance against f-ALG on the augmented one, same seed.
/// `augmentedTieBreak` exists for mutation testing.
inline AugmentationReport check_augmentation(const Instance& inst, const SeedVector& Y, double beta,
                                             TieBreak tieBreak = TieBreak::LowestId,
                                             std::optional<TieBreak> augmentedTieBreak = std::nullopt) {
    const std::size_t n = inst.num_resources(), T = inst.num_arrivals();
    const Instance aug = augment_budgets(inst);
    const Allocation a = run_gpg(inst, Y, beta, tieBreak);
    const FractionalAllocation fa = run_fgpg(aug, Y, beta, augmentedTieBreak.value_or(tieBreak));

    AugmentationReport rep;
    rep.alg = a.total;
    rep.falgAug = fa.total;
    rep.gamma = inst.gamma();
    const double scale = std::max(1.0, fa.total);
    const double tol = kCheckTol * scale;

    for (ResourceId i = 0; i < n; ++i) {
        const double B = inst.budget(i);
        if (!(B > 0.0)) continue;
        rep.perResource.require(aug.budget(i) / B * a.consumed[i], fa.consumed[i], tol,
                                Violation{"", i, 0, 0, 0, 0, ""});
    }
    rep.total.require(a.total, fa.total / (1.0 + inst.gamma()), tol, Violation{});

    // z at arrival boundaries t = 1..T+1.
    std::vector<double> x(n, 0.0), xf(n, 0.0);
    for (std::size_t t = 1; t <= T + 1; ++t) {
        for (ResourceId j = 0; j < n; ++j) {
            const double B = inst.budget(j);
            const double z = std::max(0.0, B - x[j]);
            const double zf = std::max(0.0, B - xf[j]);
            rep.zDominance.require(zf, z, kCheckTol * std::max(1.0, B),
                                   Violation{"", j, 0, static_cast<double>(t), 0, 0, ""});
        }
        if (t > T) break;
        if (a.matches[t - 1]) x[*a.matches[t - 1]] += a.paid[t - 1];
        for (const auto& s : fa.segments_of(t)) xf[s.resource] += s.consumed;
    }
    return rep;
}

inline nlohmann::ordered_json to_json(const AugmentationReport& r) {
    nlohmann::ordered_json j;
    j["alg"] = r.alg;
    j["falgAugmented"] = r.falgAug;
    j["gamma"] = r.gamma;
    j["eq11"] = to_json(r.perResource);
    j["eq10"] = to_json(r.total);
    j["zDominance"] = to_json(r.zDominance);
    return j;
}

// ---------------------------------------------------------------------------
// Classic primal-dual candidate

struct ClassicPdCandidate {
    std::vector<double> lambda; // per arrival
    std::vector<double> theta;  // per resource
    double alg = 0.0;
    double gamma = 0.0;
    double conditionLhs = 0.0;  // sum lambda + sum B theta
    double conditionRhs = 0.0;  // (1 + gamma) ALG
    bool conditionII = true;
    double minSlackI = kInf;    // min over edges of lambda_t + b theta_i - alpha b r_i
    ResourceId minResource = 0;
    std::size_t minArrival = 0;
};

inline ClassicPdCandidate classic_pd_candidate(const Instance& inst, const SeedVector& Y, double beta,
                                               double alpha = 0.5, TieBreak tb = TieBreak::LowestId) {
    const std::size_t n = inst.num_resources(), T = inst.num_arrivals();
    const TradeoffFunction g(beta);
    const Allocation a = run_gpg(inst, Y, beta, tb);
    ClassicPdCandidate c;
    c.lambda.assign(T, 0.0);
    c.theta.assign(n, 0.0);
    for (std::size_t t = 1; t <= T; ++t) {
        if (!a.matches[t - 1]) continue;
        const ResourceId i = *a.matches[t - 1];
        const double b = inst.bid(i, t);
        c.lambda[t - 1] = b * inst.reward(i) * g.complement(Y[i]);
        c.theta[i] += b / inst.budget(i) * inst.reward(i) * g(Y[i]);
    }
    c.alg = a.total;
    c.gamma = inst.gamma();
    for (double l : c.lambda) c.conditionLhs += l;
    for (ResourceId i = 0; i < n; ++i) c.conditionLhs += inst.budget(i) * c.theta[i];
    c.conditionRhs = (1.0 + c.gamma) * c.alg;
    c.conditionII = c.conditionLhs <= c.conditionRhs + kCheckTol * std::max(1.0, c.conditionRhs);
    for (std::size_t t = 1; t <= T; ++t)
        for (ResourceId i = 0; i < n; ++i) {
            const double b = inst.bid(i, t);
            if (!(b > 0.0)) continue;
            const double s = c.lambda[t - 1] + b * c.theta[i] - alpha * b * inst.reward(i);
            if (s < c.minSlackI) {
                c.minSlackI = s;
                c.minResource = i;
                c.minArrival = t;
            }
        }
    return c;
}

struct ClassicPdEstimate {
    std::size_t trials = 0;
    std::vector<double> lambda, lambdaSE, theta, thetaSE;
    std::size_t conditionFailures = 0;
    double minSlackI = kInf;
    ResourceId minResource = 0;
    std::size_t minArrival = 0;
    double minSlackSE = 0.0;
    double minEdgeValue = 0.0; // E[lambda_t + b theta_i] at the minimizing edge
};

/// Expected candidate over `trials` seeds; constraint (i) is evaluated on the means.
inline ClassicPdEstimate classic_pd_expectation(const Instance& inst, double beta, std::size_t trials,
                                                std::uint64_t rngSeed, double alpha = 0.5,
                                                TieBreak tb = TieBreak::LowestId) {
    if (trials == 0) throw PreconditionError("classic_pd_expectation requires trials >= 1");
    const std::size_t n = inst.num_resources(), T = inst.num_arrivals();
    const CounterRng rng(rngSeed);
    std::vector<detail::Moments> lam(T), th(n);
    ClassicPdEstimate e;
    e.trials = trials;
    std::vector<ClassicPdCandidate> keep;
    // Per-seed edge values are needed for the SE of the minimizing edge; store the
    // candidates only for small instances.
    const bool store = trials * (T + n) <= 50'000'000;
    for (std::size_t k = 0; k < trials; ++k) {
        auto c = classic_pd_candidate(inst, rng.seeds(k, n), beta, alpha, tb);
        if (!c.conditionII) ++e.conditionFailures;
        for (std::size_t t = 0; t < T; ++t) lam[t].add(c.lambda[t]);
        for (ResourceId i = 0; i < n; ++i) th[i].add(c.theta[i]);
        if (store) keep.push_back(std::move(c));
    }
    for (std::size_t t = 0; t < T; ++t) {
        e.lambda.push_back(lam[t].mean(trials));
        e.lambdaSE.push_back(lam[t].se(trials));
    }
    for (ResourceId i = 0; i < n; ++i) {
        e.theta.push_back(th[i].mean(trials));
        e.thetaSE.push_back(th[i].se(trials));
    }
    for (std::size_t t = 1; t <= T; ++t)
        for (ResourceId i = 0; i < n; ++i) {
            const double b = inst.bid(i, t);
            if (!(b > 0.0)) continue;
            const double s = e.lambda[t - 1] + b * e.theta[i] - alpha * b * inst.reward(i);
            if (s < e.minSlackI) {
                e.minSlackI = s;
                e.minResource = i;
                e.minArrival = t;
                e.minEdgeValue = e.lambda[t - 1] + b * e.theta[i];
            }
        }
    if (store && e.minArrival > 0) {
        detail::Moments m;
        const double b = inst.bid(e.minResource, e.minArrival);
        for (const auto& c : keep) m.add(c.lambda[e.minArrival - 1] + b * c.theta[e.minResource]);
        e.minSlackSE = m.se(trials);
    }
    return e;
}

} // namespace adwords
