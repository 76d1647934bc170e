#include "rscm/tuning.hpp"

#include "rscm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rscm {

namespace {

double coefficient_scale(const MsePolynomial& p) {
    return std::abs(p.c22) + std::abs(p.c21) + std::abs(p.c20) + std::abs(p.c02) +
           std::abs(p.c11) + std::abs(p.c10) + std::abs(p.c01) + std::abs(p.c00);
}

std::vector<double> make_grid(double step) {
    if (!(step > 0.0 && step <= 1.0))
        throw InvalidInputError("optimize: grid step must lie in (0, 1]");
    std::vector<double> g;
    const auto n = static_cast<std::size_t>(std::floor(1.0 / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) g.push_back(std::min(1.0, static_cast<double>(i) * step));
    if (g.back() < 1.0) g.push_back(1.0);
    return g;
}

} // namespace

double alpha_given_beta(const MsePolynomial& poly, double beta) {
    const double den = 2.0 * (beta * beta * poly.c22 + beta * poly.c21 + poly.c20);
    const double tol = 1e-14 * std::max(coefficient_scale(poly), 1e-300);
    if (!(den > tol))
        throw NumericalError("alpha_given_beta: degenerate objective (vanishing curvature "
                             "in alpha)");
    const double raw = -(beta * poly.c11 + poly.c10) / den;
    if (!std::isfinite(raw)) throw NumericalError("alpha_given_beta: non-finite update");
    return std::clamp(raw, 0.0, 1.0);
}

double beta_given_alpha(const MsePolynomial& poly, double alpha) {
    const double den = 2.0 * (alpha * alpha * poly.c22 + poly.c02);
    const double tol = 1e-14 * std::max(coefficient_scale(poly), 1e-300);
    if (!(den > tol))
        throw NumericalError("beta_given_alpha: degenerate objective (vanishing curvature "
                             "in beta)");
    const double raw = -(alpha * alpha * poly.c21 + alpha * poly.c11 + poly.c01) / den;
    if (!std::isfinite(raw)) throw NumericalError("beta_given_alpha: non-finite update");
    return std::clamp(raw, 0.0, 1.0);
}

TuningResult optimize_full(const MsePolynomial& poly, const OptimizeOptions& opts) {
    if (poly.kind != PolyKind::Full)
        throw InvalidInputError("optimize_full: polynomial is not a full objective");
    if (opts.max_iter < 1) throw InvalidInputError("optimize_full: max_iter must be >= 1");

    const std::vector<double> grid = make_grid(opts.grid_step);
    TuningResult r;
    r.mse = std::numeric_limits<double>::infinity();
    for (double a : grid)
        for (double b : grid) {
            const double v = evaluate(poly, a, b);
            if (v < r.mse) {
                r.mse = v;
                r.alpha = a;
                r.beta = b;
            }
        }
    if (!std::isfinite(r.mse))
        throw NumericalError("optimize_full: objective is not finite on the grid");
    r.algo = TuningAlgo::Grid;
    if (!opts.refine) return r;

    r.algo = TuningAlgo::GridRefined;
    double prev_value = r.mse;
    const double slack = 1e-12 * (1.0 + std::abs(prev_value));
    for (int it = 0; it < opts.max_iter; ++it) {
        // A vanishing curvature means the objective ignores that
        // coordinate (single-class data has no pooling direction);
        // holding it keeps the descent monotone.
        double a_next, b_next;
        try {
            a_next = alpha_given_beta(poly, r.beta);
        } catch (const NumericalError&) {
            a_next = r.alpha;
        }
        try {
            b_next = beta_given_alpha(poly, a_next);
        } catch (const NumericalError&) {
            b_next = r.beta;
        }
        const double move = std::max(std::abs(a_next - r.alpha), std::abs(b_next - r.beta));
        r.alpha = a_next;
        r.beta = b_next;
        r.iterations = it + 1;
        const double value = evaluate(poly, r.alpha, r.beta);
        if (value > prev_value + slack)
            throw NumericalError("optimize_full: alternating update increased the objective");
        prev_value = value;
        if (move < opts.tol) break;
    }
    r.mse = prev_value;
    return r;
}

TuningResult optimize_streamlined(const MsePolynomial& poly) {
    if (poly.kind != PolyKind::Streamlined)
        throw InvalidInputError("optimize_streamlined: polynomial is not a streamlined "
                                "objective");
    const double b22 = poly.c22, b21 = poly.c21, b20 = poly.c20;
    const double b11 = poly.c11, b10 = poly.c10;

    struct Candidate {
        double alpha, beta;
    };
    std::vector<Candidate> candidates;

    // Interior stationary point.
    const double den = b21 * b21 - 4.0 * b20 * b22;
    const double num_a = 2.0 * b10 * b22 - b11 * b21;
    if (den != 0.0 && num_a != 0.0) {
        const double a = num_a / den;
        const double b = (2.0 * b11 * b20 - b10 * b21) / num_a;
        if (std::isfinite(a) && std::isfinite(b) && a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)
            candidates.push_back({a, b});
    }
    // beta = 0 edge: quadratic in alpha with curvature b20.
    if (b20 > 0.0) candidates.push_back({std::clamp(-b10 / (2.0 * b20), 0.0, 1.0), 0.0});
    // beta = 1 edge.
    const double q1 = b22 + b21 + b20;
    if (q1 > 0.0) candidates.push_back({std::clamp(-(b10 + b11) / (2.0 * q1), 0.0, 1.0), 1.0});
    // alpha = 1 edge: quadratic in beta with curvature b22.
    if (b22 > 0.0) candidates.push_back({1.0, std::clamp(-(b21 + b11) / (2.0 * b22), 0.0, 1.0)});
    // alpha = 0 kills every beta term; corners cover edges whose
    // restricted curvature is not positive.
    candidates.push_back({0.0, 0.0});
    candidates.push_back({1.0, 0.0});
    candidates.push_back({1.0, 1.0});

    TuningResult r;
    r.algo = TuningAlgo::Analytic;
    r.mse = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        const double v = evaluate(poly, c.alpha, c.beta);
        if (!std::isfinite(v)) continue;
        const bool better =
            v < r.mse ||
            (v == r.mse && (c.alpha < r.alpha || (c.alpha == r.alpha && c.beta < r.beta)));
        if (better) {
            r.mse = v;
            r.alpha = c.alpha;
            r.beta = c.beta;
        }
    }
    if (!std::isfinite(r.mse))
        throw NumericalError("optimize_streamlined: objective is not finite at any candidate");
    return r;
}

std::pair<double, double> average_tuning(const std::vector<TuningResult>& results) {
    if (results.empty()) throw InvalidInputError("average_tuning: no results");
    double a = 0, b = 0;
    for (const auto& r : results) {
        a += r.alpha;
        b += r.beta;
    }
    const double k = static_cast<double>(results.size());
    return {a / k, b / k};
}

} // namespace rscm
