#include "rscm/shrink.hpp"

#include "rscm/errors.hpp"

#include <json.hpp>

#include <algorithm>

namespace rscm {

Method parse_method(std::string_view token) {
    for (Method m : all_methods())
        if (token == method_token(m)) return m;
    throw InvalidInputError("unknown method \"" + std::string(token) +
                            "\" (expected one of SCM, POOL, POLY, POLYs, POLY-Ave, "
                            "POLYs-Ave, C1, C2, C3)");
}

const char* method_token(Method m) {
    switch (m) {
        case Method::Scm: return "SCM";
        case Method::Pool: return "POOL";
        case Method::Poly: return "POLY";
        case Method::PolyS: return "POLYs";
        case Method::PolyAve: return "POLY-Ave";
        case Method::PolySAve: return "POLYs-Ave";
        case Method::C1: return "C1";
        case Method::C2: return "C2";
        case Method::C3: return "C3";
    }
    return "?";
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> methods = {
        Method::Scm, Method::Pool,     Method::Poly, Method::PolyS, Method::PolyAve,
        Method::PolySAve, Method::C1,  Method::C2,   Method::C3};
    return methods;
}

bool method_needs_moments(Method m) {
    return m != Method::Scm && m != Method::Pool;
}

const char* variant_name(EstimateVariant v) {
    switch (v) {
        case EstimateVariant::Full: return "full";
        case EstimateVariant::Streamlined: return "streamlined";
        case EstimateVariant::C1: return "c1";
        case EstimateVariant::C2: return "c2";
        case EstimateVariant::C3: return "c3";
        case EstimateVariant::C4: return "c4";
        case EstimateVariant::Scm: return "scm";
        case EstimateVariant::Pooled: return "pooled";
    }
    return "?";
}

std::string estimate_to_json(const ShrinkageEstimate& est) {
    nlohmann::json j;
    j["variant"] = variant_name(est.variant);
    j["alpha"] = est.alpha;
    j["beta"] = est.beta;
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < est.matrix.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t c = 0; c < est.matrix.cols(); ++c) row.push_back(est.matrix(i, c));
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    return j.dump(2);
}

namespace {

void validate_pair(double alpha, double beta) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InvalidInputError("shrinkage: alpha must lie in [0, 1]");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw InvalidInputError("shrinkage: beta must lie in [0, 1]");
}

void validate_shapes(const Matrix& s_k, const Matrix& s) {
    if (!s_k.square() || !s.same_shape(s_k))
        throw InvalidInputError("shrinkage: matrices must be square with equal shapes");
}

Matrix shrink_toward_trace(const Matrix& base, double alpha, double trace_value) {
    const std::size_t p = base.rows();
    Matrix out = base;
    scale_inplace(out, alpha);
    const double load = (1.0 - alpha) * trace_value / static_cast<double>(p);
    for (std::size_t i = 0; i < p; ++i) out(i, i) += load;
    return out;
}

} // namespace

Matrix partially_pooled(const Matrix& s_k, const Matrix& s, double beta) {
    validate_shapes(s_k, s);
    validate_pair(1.0, beta);
    return lincomb(beta, s_k, 1.0 - beta, s);
}

Matrix coupled_rscm(const Matrix& s_k, const Matrix& s, double alpha, double beta) {
    validate_shapes(s_k, s);
    validate_pair(alpha, beta);
    const Matrix partial = lincomb(beta, s_k, 1.0 - beta, s);
    return shrink_toward_trace(partial, alpha, trace(partial));
}

Matrix streamlined_rscm(const Matrix& s_k, const Matrix& s, double alpha, double beta,
                        TraceTarget target) {
    validate_shapes(s_k, s);
    validate_pair(alpha, beta);
    const Matrix partial = lincomb(beta, s_k, 1.0 - beta, s);
    const double tr = trace(target == TraceTarget::PooledTrace ? s : s_k);
    return shrink_toward_trace(partial, alpha, tr);
}

std::vector<ShrinkageEstimate> estimate_all(const std::vector<ClassSampleStats>& stats,
                                            const PopulationMoments& moments, Method method) {
    if (stats.empty()) throw InvalidInputError("estimate_all: no class statistics");
    if (method_needs_moments(method) && moments.num_classes() != stats.size())
        throw InvalidInputError("estimate_all: moments do not match the class count");

    const std::size_t k_count = stats.size();
    const Matrix pooled = pooled_scm(stats);
    std::vector<ShrinkageEstimate> out;
    out.reserve(k_count);

    switch (method) {
        case Method::Scm:
            for (const auto& st : stats)
                out.push_back({st.scm, 1.0, 1.0, EstimateVariant::Scm});
            return out;
        case Method::Pool:
            for (std::size_t k = 0; k < k_count; ++k)
                out.push_back({pooled, 1.0, 0.0, EstimateVariant::Pooled});
            return out;
        case Method::Poly:
            for (std::size_t k = 0; k < k_count; ++k) {
                const TuningResult r = optimize_full(coefficients_full(moments, k));
                out.push_back({coupled_rscm(stats[k].scm, pooled, r.alpha, r.beta), r.alpha,
                               r.beta, EstimateVariant::Full});
            }
            return out;
        case Method::PolyS:
            for (std::size_t k = 0; k < k_count; ++k) {
                const TuningResult r = optimize_streamlined(
                    coefficients_streamlined(moments, k, TraceTarget::PooledTrace));
                out.push_back({streamlined_rscm(stats[k].scm, pooled, r.alpha, r.beta,
                                                TraceTarget::PooledTrace),
                               r.alpha, r.beta, EstimateVariant::Streamlined});
            }
            return out;
        case Method::PolyAve: {
            std::vector<TuningResult> results;
            for (std::size_t k = 0; k < k_count; ++k)
                results.push_back(optimize_full(coefficients_full(moments, k)));
            const auto [a, b] = average_tuning(results);
            for (std::size_t k = 0; k < k_count; ++k)
                out.push_back({coupled_rscm(stats[k].scm, pooled, a, b), a, b,
                               EstimateVariant::Full});
            return out;
        }
        case Method::PolySAve: {
            std::vector<TuningResult> results;
            for (std::size_t k = 0; k < k_count; ++k)
                results.push_back(optimize_streamlined(
                    coefficients_streamlined(moments, k, TraceTarget::PooledTrace)));
            const auto [a, b] = average_tuning(results);
            for (std::size_t k = 0; k < k_count; ++k)
                out.push_back({streamlined_rscm(stats[k].scm, pooled, a, b,
                                                TraceTarget::PooledTrace),
                               a, b, EstimateVariant::Streamlined});
            return out;
        }
        case Method::C1:
            for (std::size_t k = 0; k < k_count; ++k) {
                const double a = alpha_given_beta(coefficients_full(moments, k), 1.0);
                out.push_back({coupled_rscm(stats[k].scm, pooled, a, 1.0), a, 1.0,
                               EstimateVariant::C1});
            }
            return out;
        case Method::C2:
            for (std::size_t k = 0; k < k_count; ++k) {
                const double b = beta_given_alpha(coefficients_full(moments, k), 1.0);
                out.push_back({coupled_rscm(stats[k].scm, pooled, 1.0, b), 1.0, b,
                               EstimateVariant::C2});
            }
            return out;
        case Method::C3:
            for (std::size_t k = 0; k < k_count; ++k) {
                const double a = alpha_given_beta(coefficients_full(moments, k), 0.0);
                out.push_back({coupled_rscm(stats[k].scm, pooled, a, 0.0), a, 0.0,
                               EstimateVariant::C3});
            }
            return out;
    }
    throw InvalidInputError("estimate_all: unhandled method");
}

std::vector<ShrinkageEstimate> estimate_fixed_pair(const std::vector<ClassSampleStats>& stats,
                                                   double alpha, double beta) {
    if (stats.empty()) throw InvalidInputError("estimate_fixed_pair: no class statistics");
    validate_pair(alpha, beta);
    const Matrix pooled = pooled_scm(stats);
    std::vector<ShrinkageEstimate> out;
    out.reserve(stats.size());
    const EstimateVariant variant = alpha == 0.0 ? EstimateVariant::C4 : EstimateVariant::Full;
    for (const auto& st : stats)
        out.push_back({coupled_rscm(st.scm, pooled, alpha, beta), alpha, beta, variant});
    return out;
}

} // namespace rscm
