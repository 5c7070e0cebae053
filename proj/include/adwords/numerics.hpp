#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "core.hpp"

namespace adwords {

enum class AlphaMethod { ClosedForm, Quadrature };

inline std::string to_string(AlphaMethod m) { return m == AlphaMethod::ClosedForm ? "closed-form" : "quadrature"; }

/// min{ g(y), (g(v) - g(y)) / (1 - g(y)) } for 0 <= y <= v <= 1.
inline double integrand(double y, double v, double beta) {
    if (y > v) throw PreconditionError("integrand requires y <= v");
    const TradeoffFunction g(beta);
    const double gy = g(y);
    if (y == v) return 0.0;
    if (v >= 1.0) return gy; // second branch is identically 1
    const double second = (g(v) - gy) / g.complement(y);
    return std::min(gy, second);
}

/// Point y* in [0, v] where the two branches of the integrand cross
/// (g(y*) = 1 - sqrt(1 - g(v))); the first branch is the smaller one below it.
inline double crossing_point(double v, double beta) {
    const TradeoffFunction g(beta);
    if (v >= 1.0) return 1.0;
    const double u = 1.0 - std::sqrt(g.complement(v));
    const double y = g.inverse(u);
    return std::clamp(y, 0.0, v);
}

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps, double whole,
                               double fa, double fm, double fb, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
    return adaptive_simpson(f, a, m, eps / 2.0, left, fa, flm, fm, depth - 1) +
           adaptive_simpson(f, m, b, eps / 2.0, right, fm, frm, fb, depth - 1);
}

} // namespace detail

/// Adaptive composite Simpson to absolute tolerance `eps`.
inline double integrate_simpson(const std::function<double(double)>& f, double a, double b, double eps = 1e-9) {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return detail::adaptive_simpson(f, a, b, eps, detail::simpson(a, b, fa, fm, fb), fa, fm, fb, 50);
}

/// alpha(v) = 1 - g(v) + int_0^v min{ g(y), (g(v)-g(y))/(1-g(y)) } dy.
inline double alpha_at(double v, double beta, AlphaMethod method = AlphaMethod::ClosedForm) {
    if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError("alpha_at requires v in [0,1]");
    const TradeoffFunction g(beta);
    const double head = g.complement(v);
    if (v == 0.0) return head;
    const double ys = crossing_point(v, beta);

    if (method == AlphaMethod::Quadrature) {
        auto f = [&](double y) { return integrand(std::min(y, v), v, beta); };
        return head + integrate_simpson(f, 0.0, ys, 0.5e-9) + integrate_simpson(f, ys, v, 0.5e-9);
    }

    // First branch: int g = (g(b) - g(a)) / beta.
    const double first = (g(ys) - g(0.0)) / beta;
    if (v >= 1.0) return head + (g(1.0) - g(0.0)) / beta;
    // Second branch via u = g(y): (1/beta) [G ln u + (1-G) ln(1-u)], with
    // ln u = beta (y - 1) and 1 - u = -expm1(beta (y - 1)).
    const double G = g(v);
    auto prim = [&](double y) {
        return G * beta * (y - 1.0) + (1.0 - G) * std::log(g.complement(y));
    };
    double second = 0.0;
    if (ys < v) second = (prim(v) - prim(ys)) / beta;
    return head + first + second;
}

struct AlphaMinimum {
    double x = 0.0;
    double alpha = 0.0;
};

/// Grid scan on gridN + 1 points, then golden-section refinement around the best cell.
inline AlphaMinimum minimize_alpha(double beta, std::size_t gridN = 1000, double tol = 1e-6,
                                   AlphaMethod method = AlphaMethod::ClosedForm) {
    if (gridN < 100) throw PreconditionError("minimize_alpha requires gridN >= 100");
    const auto f = [&](double x) { return alpha_at(std::clamp(x, 0.0, 1.0), beta, method); };
    std::size_t best = 0;
    double bestVal = kInf;
    for (std::size_t k = 0; k <= gridN; ++k) {
        const double val = f(static_cast<double>(k) / static_cast<double>(gridN));
        if (val < bestVal) {
            bestVal = val;
            best = k;
        }
    }
    const double h = 1.0 / static_cast<double>(gridN);
    double a = std::max(0.0, (static_cast<double>(best) - 1.0) * h);
    double b = std::min(1.0, (static_cast<double>(best) + 1.0) * h);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    AlphaMinimum m;
    m.x = 0.5 * (a + b);
    m.alpha = f(m.x);
    if (bestVal < m.alpha) { // an endpoint minimum stays where the scan found it
        m.x = static_cast<double>(best) * h;
        m.alpha = bestVal;
    }
    return m;
}

struct AlphaCurve {
    double beta = kDefaultBeta;
    std::vector<std::pair<double, double>> samples;
    double xStar = 0.0;
    double alphaStar = 0.0;
    AlphaMethod method = AlphaMethod::ClosedForm;
};

inline AlphaCurve alpha_curve(double beta, std::size_t N, AlphaMethod method = AlphaMethod::ClosedForm) {
    if (N < 2) throw PreconditionError("alpha curve needs N >= 2 samples");
    AlphaCurve c;
    c.beta = beta;
    c.method = method;
    c.samples.reserve(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double x = k + 1 == N ? 1.0 : static_cast<double>(k) / static_cast<double>(N - 1);
        c.samples.emplace_back(x, alpha_at(x, beta, method));
    }
    const auto m = minimize_alpha(beta, 1000, 1e-6, method);
    c.xStar = m.x;
    c.alphaStar = m.alpha;
    return c;
}

struct BetaRow {
    double beta = 0.0;
    double xStar = 0.0;
    double alphaStar = 0.0;
};

struct BetaSweep {
    std::vector<BetaRow> rows; // sorted by beta
    BetaRow best;
};

inline BetaSweep sweep_beta(std::vector<double> grid) {
    for (double b : grid)
        if (!(b > 0.0 && b <= 5.0)) throw PreconditionError("beta grid entries must lie in (0, 5]");
    std::sort(grid.begin(), grid.end());
    BetaSweep s;
    for (double b : grid) {
        const auto m = minimize_alpha(b);
        s.rows.push_back({b, m.x, m.alpha});
        if (s.rows.size() == 1 || m.alpha > s.best.alphaStar) s.best = s.rows.back();
    }
    return s;
}

/// Beta grid lo, lo+step, ..., hi built from integer multiples to avoid drift.
inline std::vector<double> beta_grid(double lo, double hi, double step) {
    std::vector<double> g;
    const auto k = static_cast<long long>(std::llround((hi - lo) / step));
    for (long long j = 0; j <= k; ++j) g.push_back(lo + static_cast<double>(j) * step);
    return g;
}

inline void write_sweep_csv(const BetaSweep& s, std::ostream& os) {
    char buf[128];
    os << "beta,x_star,alpha_star\n";
    for (const auto& r : s.rows) {
        std::snprintf(buf, sizeof buf, "%.6f,%.9f,%.9f\n", r.beta, r.xStar, r.alphaStar);
        os << buf;
    }
}

/// TSV with header "x\talpha" and N uniform samples.
inline void emit_figure1(double beta, std::size_t N, const std::filesystem::path& path) {
    const AlphaCurve c = alpha_curve(beta, N);
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "x\talpha\n";
    char buf[96];
    for (const auto& [x, a] : c.samples) {
        std::snprintf(buf, sizeof buf, "%.17g\t%.17g\n", x, a);
        out << buf;
    }
    if (!out) throw Error("I/O failure writing " + path.string());
}

} // namespace adwords
