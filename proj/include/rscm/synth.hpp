#pragma once

#include "rscm/matrix.hpp"
#include "rscm/rng.hpp"

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace rscm {

enum class CovKind { Ar1, Cs };

// AR(1): m_ij = rho^|i-j|. CS: 1 on the diagonal, rho elsewhere.
// Requires 0 <= rho < 1 (both families are positive definite there).
Matrix make_covariance(CovKind kind, double rho, std::size_t p);

// One sampled class: x = mean + s * L z with z standard normal,
// L the Cholesky factor of `covariance`, and s = 1 for Gaussian data or
// s = sqrt((dof - 2) / chi2(dof)) for heavy tails, so the population
// covariance equals `covariance` exactly in both cases (dof > 4 keeps
// fourth moments finite).
struct PopulationSpec {
    Vector mean; // empty means the origin
    Matrix covariance;
    double dof = std::numeric_limits<double>::infinity();
    std::size_t count = 0; // samples drawn per trial
};

struct TheoreticalMoments {
    double eta;   // tr(M)/p
    double gamma; // p * ||M||_F^2 / tr(M)^2, in [1, p]
    double kappa; // elliptical kurtosis: 0 for Gaussian, 2/(dof-4) otherwise
};

TheoreticalMoments theoretical_moments(const PopulationSpec& spec);

// Caches the Cholesky factor so repeated trials do not refactor.
class PopulationSampler {
public:
    explicit PopulationSampler(PopulationSpec spec);

    Matrix draw(std::size_t n, RngStream& rng) const; // n x p
    Matrix draw(RngStream& rng) const { return draw(spec_.count, rng); }
    const PopulationSpec& spec() const { return spec_; }

private:
    PopulationSpec spec_;
    Matrix chol_;
};

Matrix sample_population(const PopulationSpec& spec, std::size_t n, RngStream& rng);

enum class SetupName { A, B, C, D };

SetupName parse_setup_name(std::string_view s);
const char* setup_name_str(SetupName name);

// Setup D redraws its populations every trial; A, B, C are fixed for a
// whole experiment (their class means are drawn once from mean_rng).
bool setup_is_randomized(SetupName name);

// Four-class presets:
//   A: AR(1) rho = .2/.3/.4/.5, n = 25/50/75/100, dof = 8
//   B: same but compound symmetry
//   C: AR(1) rho=.6 twice then CS rho=.1 twice, n = 100, dof = 12/8/12/8
std::vector<PopulationSpec> make_setup(SetupName name, std::size_t p, RngStream& mean_rng);

// Setup D: per class, n ~ U{10..200}, dof ~ U{5..12}, structure by fair
// coin (AR(1) vs CS), rho ~ U(0, 0.9), fresh standard normal mean.
std::vector<PopulationSpec> draw_randomized_setup(std::size_t p, RngStream& rng);

// Populations from a JSON config:
// {"dim": 20, "populations": [{"mean": [...], "cov": {"kind": "ar1",
//  "rho": 0.5} | {"matrix": [[...], ...]}, "dof": 8, "n": 25}, ...]}
// mean may be omitted (zeros); dof omitted or null means Gaussian. The
// dimension comes from an explicit cov matrix, the entry's "dim", or
// the top-level "dim", in that order.
std::vector<PopulationSpec> populations_from_json_text(const std::string& text);
std::vector<PopulationSpec> populations_from_json_file(const std::string& path);

} // namespace rscm
