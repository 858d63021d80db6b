#include "certeq/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace certeq {

DiscreteDistribution::DiscreteDistribution(std::vector<double> atoms,
                                           std::vector<double> probs) {
    require(!atoms.empty(), "DiscreteDistribution: empty support");
    require(atoms.size() == probs.size(),
            "DiscreteDistribution: atoms/probs length mismatch");

    // Sort by atom and merge duplicates by summing probability.
    std::vector<std::size_t> order(atoms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return atoms[i] < atoms[j]; });

    atoms_.reserve(atoms.size());
    probs_.reserve(atoms.size());
    for (std::size_t idx : order) {
        double a = atoms[idx];
        double p = probs[idx];
        require(std::isfinite(a), "DiscreteDistribution: non-finite atom");
        require(std::isfinite(p) && p > 0.0,
                "DiscreteDistribution: probabilities must be positive");
        if (!atoms_.empty() && a == atoms_.back()) {
            probs_.back() += p;
        } else {
            atoms_.push_back(a);
            probs_.push_back(p);
        }
    }

    // compensated sum so the tolerance stays meaningful for large supports
    double total = 0.0, comp = 0.0;
    for (double p : probs_) {
        const double t = total + p;
        comp += std::abs(total) >= std::abs(p) ? (total - t) + p : (p - t) + total;
        total = t;
    }
    total += comp;
    require(std::abs(total - 1.0) <= 1e-12 * std::max(1.0, std::abs(total)),
            "DiscreteDistribution: probabilities must sum to 1");
    // Remove the residual rounding so downstream CDF sweeps see exact mass 1.
    for (double& p : probs_) p /= total;
}

DiscreteDistribution
DiscreteDistribution::from_samples(const std::vector<double>& samples) {
    require(!samples.empty(), "from_samples: empty sample");
    std::vector<double> probs(samples.size(), 1.0 / double(samples.size()));
    return DiscreteDistribution(samples, std::move(probs));
}

double DiscreteDistribution::expect(const std::function<double(double)>& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        double v = f(atoms_[i]);
        if (!std::isfinite(v))
            throw std::invalid_argument("expect: non-finite value at atom");
        acc += probs_[i] * v;
    }
    return acc;
}

double DiscreteDistribution::mean() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) acc += probs_[i] * atoms_[i];
    return acc;
}

DiscreteDistribution DiscreteDistribution::scaled(double delta) const {
    require(delta > 0.0, "scaled: delta must be positive");
    std::vector<double> a(atoms_);
    for (double& t : a) t *= delta;
    return DiscreteDistribution(std::move(a), probs_);
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
    DistributionSpec s;
    s.kind = DistKind::Uniform;
    s.a = lo;
    s.b = hi;
    s.check();
    return s;
}

DistributionSpec DistributionSpec::lognormal(double mu, double sigma) {
    DistributionSpec s;
    s.kind = DistKind::Lognormal;
    s.a = mu;
    s.b = sigma;
    s.check();
    return s;
}

DistributionSpec DistributionSpec::pareto(double scale, double shape) {
    DistributionSpec s;
    s.kind = DistKind::Pareto;
    s.a = scale;
    s.b = shape;
    s.check();
    return s;
}

DistributionSpec DistributionSpec::gamma(double shape, double scale) {
    DistributionSpec s;
    s.kind = DistKind::Gamma;
    s.a = shape;
    s.b = scale;
    s.check();
    return s;
}

DistributionSpec DistributionSpec::dirac(double c) {
    DistributionSpec s;
    s.kind = DistKind::Dirac;
    s.a = c;
    return s;
}

DistributionSpec DistributionSpec::explicit_dist(std::vector<double> atoms,
                                                 std::vector<double> probs) {
    DistributionSpec s;
    s.kind = DistKind::Explicit;
    s.atoms = std::move(atoms);
    s.probs = std::move(probs);
    s.check();
    return s;
}

void DistributionSpec::check() const {
    switch (kind) {
    case DistKind::Uniform:
        require(a < b, "uniform: lo must be < hi");
        break;
    case DistKind::Lognormal:
        require(b > 0.0, "lognormal: sigma must be positive");
        break;
    case DistKind::Pareto:
        require(a > 0.0 && b > 0.0, "pareto: scale and shape must be positive");
        break;
    case DistKind::Gamma:
        require(a > 0.0 && b > 0.0, "gamma: shape and scale must be positive");
        break;
    case DistKind::Dirac:
        break;
    case DistKind::Explicit:
        DiscreteDistribution(atoms, probs); // validates
        break;
    }
    require(std::isfinite(shift), "spec: non-finite shift");
}

void ContaminationModel::check() const {
    require(mix_weight >= 0.0 && mix_weight <= 1.0,
            "contamination: mix_weight must be in [0,1]");
    noise.check();
}

// Wichura's algorithm AS241 (PPND16), accurate to ~1e-16 for p in (0,1).
double normal_quantile(double p) {
    require(p > 0.0 && p < 1.0, "normal_quantile: p outside (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                     67265.770927008700853) * r + 45921.953931549871457) * r +
                   13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545703 * r + 28729.085735721942674) * r +
                     39307.89580009271061) * r + 21213.794301586595867) * r +
                   5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double v;
    if (r <= 5.0) {
        r -= 1.6;
        v = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                  0.24178072517745061177) * r + 1.27045825245236838258) * r +
                3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                  0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                  1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -v : v;
}

namespace {

// Marsaglia-Tsang for shape >= 1; shapes below 1 are boosted by one and
// corrected with a power of an extra uniform.
double sample_gamma(double shape, double scale, Rng& rng) {
    if (shape < 1.0) {
        double u = rng.uniform01();
        return sample_gamma(shape + 1.0, scale, rng) *
               std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z = normal_quantile(rng.uniform01());
        double t = 1.0 + c * z;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = rng.uniform01();
        if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v))
            return scale * d * v;
    }
}

} // namespace

double sample_one(const DistributionSpec& spec, Rng& rng) {
    double x = 0.0;
    switch (spec.kind) {
    case DistKind::Uniform:
        x = spec.a + (spec.b - spec.a) * rng.uniform01();
        break;
    case DistKind::Lognormal:
        x = std::exp(spec.a + spec.b * normal_quantile(rng.uniform01()));
        break;
    case DistKind::Pareto:
        // Inverse CDF of F(x) = 1 - (scale/x)^shape on [scale, inf).
        x = spec.a * std::pow(1.0 - rng.uniform01(), -1.0 / spec.b);
        break;
    case DistKind::Gamma:
        x = sample_gamma(spec.a, spec.b, rng);
        break;
    case DistKind::Dirac:
        x = spec.a;
        break;
    case DistKind::Explicit: {
        double u = rng.uniform01();
        double acc = 0.0;
        x = spec.atoms.back();
        for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
            acc += spec.probs[i];
            if (u <= acc) {
                x = spec.atoms[i];
                break;
            }
        }
        break;
    }
    }
    return x + spec.shift;
}

std::vector<double> sample_vector(const DistributionSpec& spec, std::size_t k,
                                  std::uint64_t seed) {
    require(k >= 1, "sample: K must be >= 1");
    spec.check();
    Rng rng(seed);
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = sample_one(spec, rng);
    return out;
}

DiscreteDistribution sample(const DistributionSpec& spec, std::size_t k,
                            std::uint64_t seed) {
    return DiscreteDistribution::from_samples(sample_vector(spec, k, seed));
}

double kantorovich_distance_dist(const DiscreteDistribution& p,
                                 const DiscreteDistribution& q) {
    const auto& pa = p.atoms();
    const auto& qa = q.atoms();
    std::size_t i = 0, j = 0;
    double fp = 0.0, fq = 0.0; // CDF values left of the sweep point
    double dist = 0.0;
    double prev = std::min(pa.front(), qa.front());
    while (i < pa.size() || j < qa.size()) {
        double t;
        if (i < pa.size() && (j >= qa.size() || pa[i] <= qa[j]))
            t = pa[i];
        else
            t = qa[j];
        dist += std::abs(fp - fq) * (t - prev);
        while (i < pa.size() && pa[i] == t) fp += p.probs()[i++];
        while (j < qa.size() && qa[j] == t) fq += q.probs()[j++];
        prev = t;
    }
    return dist;
}

std::vector<double> contaminate(const std::vector<double>& samples,
                                const ContaminationModel& model,
                                std::uint64_t seed) {
    model.check();
    Rng rng(seed);
    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        // Both draws are consumed for every sample so that the perturbation
        // pattern is unchanged when only the noise magnitude varies.
        double u = rng.uniform01();
        double noise = sample_one(model.noise, rng);
        out[i] = samples[i] + (u < model.mix_weight ? noise : 0.0);
    }
    return out;
}

} // namespace certeq
