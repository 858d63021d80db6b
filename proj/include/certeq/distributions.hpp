#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "certeq/common.hpp"

namespace certeq {

/// Finite discrete distribution with sorted support.
///
/// Atoms are strictly increasing; duplicate sample values are merged by
/// summing their probabilities. Probabilities are positive and sum to one.
/// Immutable after construction.
class DiscreteDistribution {
  public:
    DiscreteDistribution(std::vector<double> atoms, std::vector<double> probs);

    /// Empirical distribution of a sample, each point with weight 1/K.
    static DiscreteDistribution from_samples(const std::vector<double>& samples);

    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return atoms_.size(); }

    double min() const { return atoms_.front(); }
    double max() const { return atoms_.back(); }
    Interval support() const { return {min(), max()}; }

    /// E[f(xi)]; throws if f is not finite at some atom.
    double expect(const std::function<double(double)>& f) const;

    double mean() const;

    /// Distribution of delta*xi for delta > 0.
    DiscreteDistribution scaled(double delta) const;

  private:
    std::vector<double> atoms_;
    std::vector<double> probs_;
};

enum class DistKind { Uniform, Lognormal, Pareto, Gamma, Dirac, Explicit };

/// Parametric description of a sampling distribution.
///
/// `shift` is added to every draw after sampling; it defaults to zero and
/// exists mainly to allow re-centering of the Pareto variant.
struct DistributionSpec {
    DistKind kind = DistKind::Dirac;
    double a = 0.0; // uniform lo | lognormal mu | pareto scale | gamma shape | dirac c
    double b = 0.0; // uniform hi | lognormal sigma | pareto shape | gamma scale
    double shift = 0.0;
    std::vector<double> atoms; // explicit only
    std::vector<double> probs; // explicit only

    static DistributionSpec uniform(double lo, double hi);
    static DistributionSpec lognormal(double mu, double sigma);
    static DistributionSpec pareto(double scale, double shape);
    static DistributionSpec gamma(double shape, double scale);
    static DistributionSpec dirac(double c);
    static DistributionSpec explicit_dist(std::vector<double> atoms,
                                          std::vector<double> probs);

    void check() const;
};

/// Additive contamination channel: each sample is perturbed by an
/// independent draw from `noise` with probability `mix_weight`.
struct ContaminationModel {
    double mix_weight = 0.0;
    DistributionSpec noise = DistributionSpec::dirac(0.0);

    void check() const;
};

/// Deterministic random stream (mt19937_64 with an explicit seed).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in the open interval (0,1).
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    std::mt19937_64 engine_;
};

/// Quantile of the standard normal distribution (Wichura's PPND16).
double normal_quantile(double p);

/// One draw from `spec` consuming the stream `rng`.
double sample_one(const DistributionSpec& spec, Rng& rng);

/// K iid draws as a vector (pre-merge, in draw order).
std::vector<double> sample_vector(const DistributionSpec& spec, std::size_t k,
                                  std::uint64_t seed);

/// Empirical distribution of K iid draws, each with probability 1/K
/// (duplicates merged). Deterministic for a fixed seed.
DiscreteDistribution sample(const DistributionSpec& spec, std::size_t k,
                            std::uint64_t seed);

/// Kantorovich (Wasserstein-1) distance between two discrete
/// distributions: the exact area between their CDFs.
double kantorovich_distance_dist(const DiscreteDistribution& p,
                                 const DiscreteDistribution& q);

/// Applies the contamination channel to a sample vector; deterministic
/// for a fixed seed. With mix_weight = 0 the input is returned unchanged.
std::vector<double> contaminate(const std::vector<double>& samples,
                                const ContaminationModel& model,
                                std::uint64_t seed);

} // namespace certeq
