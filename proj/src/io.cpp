#include "certeq/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace certeq {

using nlohmann::json;

namespace {

double num(const json& j, const char* key) {
    require(j.contains(key), std::string("json: missing field '") + key + "'");
    return j.at(key).get<double>();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

DistributionSpec distribution_from_json(const std::string& text) {
    json j = json::parse(text);
    require(j.contains("kind"), "distribution json: missing 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    DistributionSpec spec;
    if (kind == "uniform")
        spec = DistributionSpec::uniform(num(j, "lo"), num(j, "hi"));
    else if (kind == "lognormal")
        spec = DistributionSpec::lognormal(num(j, "mu"), num(j, "sigma"));
    else if (kind == "pareto")
        spec = DistributionSpec::pareto(num(j, "scale"), num(j, "shape"));
    else if (kind == "gamma")
        spec = DistributionSpec::gamma(num(j, "shape"), num(j, "scale"));
    else if (kind == "dirac")
        spec = DistributionSpec::dirac(num(j, "c"));
    else if (kind == "explicit")
        spec = DistributionSpec::explicit_dist(
            j.at("atoms").get<std::vector<double>>(),
            j.at("probs").get<std::vector<double>>());
    else
        throw std::invalid_argument("distribution json: unknown kind " + kind);
    if (j.contains("shift")) spec.shift = j.at("shift").get<double>();
    spec.check();
    return spec;
}

std::string distribution_to_json(const DistributionSpec& spec) {
    json j;
    switch (spec.kind) {
    case DistKind::Uniform:
        j = {{"kind", "uniform"}, {"lo", spec.a}, {"hi", spec.b}};
        break;
    case DistKind::Lognormal:
        j = {{"kind", "lognormal"}, {"mu", spec.a}, {"sigma", spec.b}};
        break;
    case DistKind::Pareto:
        j = {{"kind", "pareto"}, {"scale", spec.a}, {"shape", spec.b}};
        break;
    case DistKind::Gamma:
        j = {{"kind", "gamma"}, {"shape", spec.a}, {"scale", spec.b}};
        break;
    case DistKind::Dirac:
        j = {{"kind", "dirac"}, {"c", spec.a}};
        break;
    case DistKind::Explicit:
        j = {{"kind", "explicit"}, {"atoms", spec.atoms}, {"probs", spec.probs}};
        break;
    }
    if (spec.shift != 0.0) j["shift"] = spec.shift;
    return j.dump();
}

DistributionSpec distribution_from_csv(const std::string& text) {
    std::vector<double> atoms, probs;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        require(comma != std::string::npos,
                "distribution csv: expected 'atom,prob' per line");
        atoms.push_back(std::stod(line.substr(0, comma)));
        probs.push_back(std::stod(line.substr(comma + 1)));
    }
    return DistributionSpec::explicit_dist(std::move(atoms), std::move(probs));
}

PiecewiseLinearUtility plu_from_json(const std::string& text) {
    json j = json::parse(text);
    Grid grid(j.at("breakpoints").get<std::vector<double>>());
    return PiecewiseLinearUtility(std::move(grid),
                                  j.at("values").get<std::vector<double>>(),
                                  num(j, "lipschitz"));
}

std::string plu_to_json(const PiecewiseLinearUtility& u) {
    json j = {{"breakpoints", u.grid().breakpoints()},
              {"values", u.values()},
              {"lipschitz", u.lipschitz()}};
    return j.dump();
}

ParametricUtility parametric_from_json(const std::string& text) {
    json j = json::parse(text);
    const std::string name = j.at("name").get<std::string>();
    if (name == "exponential") {
        return ParametricUtility::exponential(
            num(j, "alpha"), j.value("scale", 1.0), j.value("shift", 0.0));
    }
    if (name == "two_piece_linear")
        return ParametricUtility::two_piece_linear(num(j, "gamma1"),
                                                   num(j, "gamma2"));
    throw std::invalid_argument("utility json: unknown name " + name);
}

std::string parametric_to_json(const ParametricUtility& u) {
    json j;
    if (u.kind == UtilityKind::Exponential)
        j = {{"name", "exponential"},
             {"alpha", u.alpha},
             {"scale", u.scale},
             {"shift", u.shift}};
    else
        j = {{"name", "two_piece_linear"},
             {"gamma1", u.gamma1},
             {"gamma2", u.gamma2}};
    return j.dump();
}

RmoceConfig rmoce_config_from_json(const std::string& text) {
    json j = json::parse(text);
    RmoceConfig cfg;
    if (j.contains("distribution"))
        cfg.spec = distribution_from_json(j.at("distribution").dump());
    cfg.sample_count = j.value("K", cfg.sample_count);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("center_utility")) {
        auto u = parametric_from_json(j.at("center_utility").dump());
        require(u.kind == UtilityKind::Exponential,
                "rmoce config: center utility must be exponential");
        cfg.alpha = u.alpha;
    }
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.breakpoints = j.value("N", cfg.breakpoints);
    cfg.lipschitz = j.value("L", cfg.lipschitz);
    cfg.radius = j.value("radius", cfg.radius);
    cfg.truncate_eps = j.value("truncate_eps", cfg.truncate_eps);
    if (j.contains("x_domain")) {
        auto xs = j.at("x_domain").get<std::vector<double>>();
        require(xs.size() == 2, "rmoce config: x_domain must be [lo, hi]");
        cfg.x_policy = XPolicy::Explicit;
        cfg.x_explicit = {xs[0], xs[1]};
    } else if (j.contains("x_policy")) {
        const std::string p = j.at("x_policy").get<std::string>();
        if (p == "half")
            cfg.x_policy = XPolicy::Half;
        else if (p == "prop32")
            cfg.x_policy = XPolicy::Prop32;
        else
            throw std::invalid_argument("rmoce config: unknown x_policy " + p);
    }
    return cfg;
}

std::string rmoce_config_to_json(const RmoceConfig& config) {
    json j;
    j["distribution"] = json::parse(distribution_to_json(config.spec));
    j["K"] = config.sample_count;
    j["seed"] = config.seed;
    j["alpha"] = config.alpha;
    j["N"] = config.breakpoints;
    j["L"] = config.lipschitz;
    j["radius"] = config.radius;
    j["truncate_eps"] = config.truncate_eps;
    switch (config.x_policy) {
    case XPolicy::Half: j["x_policy"] = "half"; break;
    case XPolicy::Prop32: j["x_policy"] = "prop32"; break;
    case XPolicy::Explicit:
        j["x_domain"] = {config.x_explicit.lo, config.x_explicit.hi};
        break;
    }
    return j.dump();
}

std::string rmoce_solution_to_json(const RmoceSolution& sol,
                                   const BuiltProblem& built,
                                   double error_bound_value,
                                   double runtime_seconds) {
    json j;
    j["value"] = sol.value;
    j["x_star"] = sol.x_star;
    j["status"] = sol.status == RmoceStatus::Converged ? "converged" : "max_iter";
    j["iterations"] = sol.iterations;
    j["worst_utility"] = json::parse(plu_to_json(sol.worst_utility));
    j["x_domain"] = {built.problem.x_domain.lo, built.problem.x_domain.hi};
    j["utility_span"] = {built.domain.lo, built.domain.hi};
    j["mesh"] = built.grid.mesh();
    j["error_bound"] = error_bound_value;
    j["radius"] = built.problem.ball.radius;
    j["runtime_seconds"] = runtime_seconds;
    return j.dump(2);
}

std::string plu_to_csv(const PiecewiseLinearUtility& u) {
    std::ostringstream os;
    os << "t,u\n";
    for (std::size_t i = 0; i < u.grid().size(); ++i)
        os << fmt(u.grid().point(i)) << ',' << fmt(u.values()[i]) << '\n';
    return os.str();
}

std::string robustness_report_to_json(const RobustnessReport& rep,
                                      std::uint64_t seed,
                                      double runtime_seconds) {
    json j;
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["stderr"] = rep.stderr_;
    j["channel_distance"] = rep.channel_distance;
    j["lipschitz"] = rep.lipschitz;
    j["N"] = rep.sample_size;
    j["M"] = rep.replications;
    j["pass"] = rep.pass;
    j["seed"] = seed;
    j["runtime_seconds"] = runtime_seconds;
    return j.dump(2);
}

std::string robustness_values_to_csv(const RobustnessReport& rep) {
    std::ostringstream os;
    os << "replication,clean,contaminated\n";
    for (std::size_t m = 0; m < rep.clean_values.size(); ++m)
        os << m << ',' << fmt(rep.clean_values[m]) << ','
           << fmt(rep.contaminated_values[m]) << '\n';
    return os.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out.good())
        throw std::runtime_error("cannot write file: " + path);
    out << content;
}

} // namespace certeq
