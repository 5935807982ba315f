#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gencond/chart.hpp"
#include "gencond/errors.hpp"
#include "gencond/geometry.hpp"
#include "gencond/rng.hpp"

namespace gencond {
namespace experiments {

/// Random polynomial perturbation of every metric component. Coefficients
/// are drawn uniformly from [-1, 1] by a SplitMix64 stream at the given
/// seed, in a fixed order (components in lower-triangle order, monomials by
/// ascending degree), so the perturbed chart is a pure function of these
/// fields.
struct PerturbationSpec {
    std::uint64_t seed = 1;
    double amplitude = 0.05;
    int degree = 3;
    /// Box on which the Lorentzian signature is re-verified by grid
    /// sampling; empty means the base chart's sample box.
    std::vector<std::pair<double, double>> box;
};

/// Adds amplitude * h_ij to each metric component, h_ij a random polynomial
/// of degree <= spec.degree. Verifies the signature on a grid over the box
/// and throws SignatureError when the amplitude destroys it. amplitude = 0
/// returns an equivalent chart.
expr::Chart perturb_metric(const expr::Chart& base, const PerturbationSpec& spec);

struct ClassTally {
    int samples = 0;
    int generic = 0;
    int r_nongeneric = 0;
};

struct CensusReport {
    std::string chart_id;
    int n_points = 0;
    int r = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    ClassTally timelike;
    ClassTally null_class;
    ClassTally spacelike;

    int total_samples() const {
        return timelike.samples + null_class.samples + spacelike.samples;
    }
    int generic_count() const {
        return timelike.generic + null_class.generic + spacelike.generic;
    }
    int r_nongeneric_count() const {
        return timelike.r_nongeneric + null_class.r_nongeneric + spacelike.r_nongeneric;
    }
    double generic_fraction() const {
        int t = total_samples();
        return t == 0 ? 0.0 : static_cast<double>(generic_count()) / t;
    }
};

/// One evaluated vector of the census, for the per-sample dump.
struct CensusSample {
    int point_index = 0;
    std::vector<double> point;
    std::vector<double> vector;
    geometry::CausalClass causal_class = geometry::CausalClass::Spacelike;
    std::vector<double> magnitudes;
    bool generic = false;
    bool r_nongeneric = false;
};

/// Samples n_points uniformly from the chart's sample box intersected with
/// its region; at each point evaluates one timelike, one exactly-null and
/// one spacelike vector (built in a g-orthonormal frame, so the null one
/// solves g(X,X) = 0 to rounding). Each sample uses the SplitMix64
/// substream (seed, point index); the reduction runs in point order, so the
/// report is bit-identical for a fixed seed regardless of thread count.
/// When samples_out is nonnull it receives all 3*n_points evaluations.
CensusReport genericity_census(const expr::Chart& chart, int n_points, int r, std::uint64_t seed,
                               double tol = 1e-10, std::vector<CensusSample>* samples_out = nullptr);

void write_census_csv(std::ostream& out, const expr::Chart& chart,
                      const std::vector<CensusSample>& samples);

struct CatalogEntry {
    expr::Chart chart;
    /// Genericity behavior measured with this library's own census and
    /// vector tests, phrased so a reader can rerun it.
    std::string note;
};

/// Built-in charts: minkowski3/4/5, desitter4, schwarzschild4, flrw4,
/// ppwave4, each with region constraints and a measured-behavior note.
const std::vector<CatalogEntry>& catalog();

/// Catalog chart by name; throws DomainError listing the known ids.
const expr::Chart& catalog_chart(const std::string& id);

}  // namespace experiments
}  // namespace gencond
