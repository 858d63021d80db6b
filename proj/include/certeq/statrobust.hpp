#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "certeq/distributions.hpp"
#include "certeq/rmoce.hpp"
#include "certeq/utility.hpp"

namespace certeq {

/// Plug-in estimator definition, fixed across replications: the nominal
/// utility lives on a fixed grid and sample points falling outside the
/// span are handled by the flat continuation of the utility. With
/// radius = 0 the estimator is the plain certainty equivalent of the
/// center; use_rmoce switches to the worst-case value over the ball
/// (atoms winsorized into the covered range).
struct EstimatorSpec {
    PiecewiseLinearUtility center;
    Interval x_domain;
    double radius = 0.0;
    bool use_rmoce = false;
};

/// Estimate from one sample; permutation invariant in the sample order.
double plug_in_estimate(const std::vector<double>& samples,
                        const EstimatorSpec& estimator);

/// Law of the estimator: M independent replications, each on a fresh
/// sample of the given size (contaminated when a channel is supplied).
/// Replication k draws its base sample with seed derive_seed(master, 2k)
/// and its noise with derive_seed(master, 2k+1), so runs with the same
/// master seed are coupled sample-by-sample across channels.
std::vector<double>
estimator_law(const DistributionSpec& spec,
              const std::optional<ContaminationModel>& contamination,
              std::size_t sample_size, std::size_t replications,
              const EstimatorSpec& estimator, std::uint64_t master_seed);

struct RobustnessConfig {
    DistributionSpec base = DistributionSpec::uniform(-1.0, 1.0);
    ContaminationModel contamination;
    std::size_t sample_size = 50;   // N
    std::size_t replications = 200; // M
    double lipschitz = 0.0;         // 0: use the center's steepest slope
    double alpha = 2.0;             // nominal utility curvature
    std::size_t breakpoints = 10;
    double radius = 0.0;
    bool use_rmoce = false;
    double truncate_eps = 1e-4;
    std::uint64_t seed = 42;
};

struct RobustnessReport {
    double lhs = 0.0;    // distance between the two estimator laws
    double rhs = 0.0;    // L times the distance between the data channels
    double stderr_ = 0.0; // permutation-based Monte-Carlo scale of lhs
    double channel_distance = 0.0; // distance between clean/contaminated data
    double lipschitz = 0.0;
    std::size_t sample_size = 0;
    std::size_t replications = 0;
    bool pass = false; // lhs <= rhs + 2 stderr
    std::vector<double> clean_values;
    std::vector<double> contaminated_values;
};

/// Empirical check of the stability inequality: the Kantorovich distance
/// between the estimator's laws under clean and contaminated sampling
/// must not exceed the Lipschitz modulus times the distance between the
/// two data distributions (estimated on a large reference sample).
RobustnessReport robustness_check(const RobustnessConfig& config);

} // namespace certeq
