#include "certeq/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "certeq/io.hpp"
#include "certeq/kantorovich.hpp"
#include "certeq/statrobust.hpp"

namespace certeq {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

double to_num(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    require(used == s.size(), "malformed number: " + s);
    return v;
}

std::vector<double> parse_number_list(const std::string& arg) {
    std::vector<double> out;
    for (const auto& tok : split(arg, ','))
        if (!tok.empty()) out.push_back(to_num(tok));
    require(!out.empty(), "empty number list");
    return out;
}

std::string out_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

} // namespace

DistributionSpec parse_dist_arg(const std::string& arg) {
    if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json")
        return distribution_from_json(read_text_file(arg));
    if (arg.rfind("csv:", 0) == 0)
        return distribution_from_csv(read_text_file(arg.substr(4)));
    auto parts = split(arg, ':');
    require(!parts.empty(), "empty distribution argument");
    const std::string kind = parts[0];
    auto p = [&](std::size_t i) {
        require(parts.size() > i, "distribution " + kind + ": missing parameter");
        return to_num(parts[i]);
    };
    if (kind == "uniform") return DistributionSpec::uniform(p(1), p(2));
    if (kind == "lognormal") return DistributionSpec::lognormal(p(1), p(2));
    if (kind == "pareto") return DistributionSpec::pareto(p(1), p(2));
    if (kind == "gamma") return DistributionSpec::gamma(p(1), p(2));
    if (kind == "dirac") return DistributionSpec::dirac(p(1));
    throw std::invalid_argument("unknown distribution kind: " + kind);
}

DiscreteDistribution parse_atoms_arg(const std::string& arg) {
    if (arg.rfind("csv:", 0) == 0) {
        auto spec = distribution_from_csv(read_text_file(arg.substr(4)));
        return DiscreteDistribution(spec.atoms, spec.probs);
    }
    const auto dots = arg.find("..");
    if (dots != std::string::npos) {
        const double lo = to_num(arg.substr(0, dots));
        const double hi = to_num(arg.substr(dots + 2));
        require(hi >= lo, "atom range is empty");
        std::vector<double> atoms;
        for (double v = lo; v <= hi + 1e-12; v += 1.0) atoms.push_back(v);
        return DiscreteDistribution::from_samples(atoms);
    }
    return DiscreteDistribution::from_samples(parse_number_list(arg));
}

ParametricUtility parse_utility_arg(const std::string& arg) {
    auto parts = split(arg, ':');
    const std::string kind = parts[0];
    auto p = [&](std::size_t i, double fallback) {
        return parts.size() > i ? to_num(parts[i]) : fallback;
    };
    if (kind == "exp") {
        require(parts.size() >= 2, "exp utility needs an alpha");
        return ParametricUtility::exponential(to_num(parts[1]), p(2, 1.0),
                                              p(3, 0.0));
    }
    if (kind == "twopiece") {
        require(parts.size() >= 3, "twopiece utility needs two slopes");
        return ParametricUtility::two_piece_linear(to_num(parts[1]),
                                                   to_num(parts[2]));
    }
    throw std::invalid_argument("unknown utility: " + arg);
}

std::vector<Table1Row> table1_rows(std::uint64_t seed) {
    const auto nominal = ParametricUtility::exponential(2.0, 0.5, 0.0);
    // labels match the CLI shorthand and stay free of CSV separators
    const std::vector<std::pair<std::string, DistributionSpec>> dists = {
        {"uniform:-1:1", DistributionSpec::uniform(-1.0, 1.0)},
        {"lognormal:0:1", DistributionSpec::lognormal(0.0, 1.0)},
        {"pareto:1:1.5", DistributionSpec::pareto(1.0, 1.5)},
        {"gamma:0.53:3", DistributionSpec::gamma(0.53, 3.0)},
    };
    const std::vector<std::size_t> ks = {10, 100, 1000};
    std::vector<Table1Row> rows;
    std::uint64_t stream = 0;
    for (const auto& [label, spec] : dists) {
        for (std::size_t k : ks) {
            const auto t0 = std::chrono::steady_clock::now();
            auto d = sample(spec, k, derive_seed(seed, stream++));
            auto mo = moce(d, nominal);
            auto oc = oce(d, nominal);
            Table1Row row;
            row.label = label;
            row.k = k;
            row.moce_value = mo.value;
            row.oce_value = oc.value;
            row.x_star = mo.x_star;
            row.eta_star = oc.x_star;
            row.cpu_seconds = seconds_since(t0);
            row.xi_min = d.min();
            row.xi_max = d.max();
            rows.push_back(row);
        }
    }
    return rows;
}

std::string table1_csv(const std::vector<Table1Row>& rows) {
    std::ostringstream os;
    os.precision(10);
    os << "distribution,K,M_u,S_u,x_star,eta_star,cpu_time,M_check,S_check\n";
    for (const auto& r : rows) {
        os << r.label << ',' << r.k << ',' << r.moce_value << ',' << r.oce_value
           << ',' << r.x_star << ',' << r.eta_star << ',' << r.cpu_seconds << ','
           << 1.0 - std::exp(-2.0 * r.x_star) << ',' << 2.0 * r.x_star << '\n';
    }
    return os.str();
}

namespace {

json ce_result_json(const char* command, const CeResult& res, double runtime) {
    json j;
    j["command"] = command;
    j["value"] = res.value;
    j["x_star"] = res.x_star;
    j["bracket"] = {res.bracket.lo, res.bracket.hi};
    j["evaluations"] = res.evaluations;
    j["status"] = res.status == CeStatus::Ok
                      ? "ok"
                      : res.status == CeStatus::FlatOptimum ? "flat_optimum"
                                                            : "no_interior_optimum";
    j["runtime_seconds"] = runtime;
    return j;
}

struct CommonArgs {
    std::string dist;
    std::string atoms;
    std::string utility = "exp:2:0.5";
    std::size_t k = 100;
    std::uint64_t seed = 42;
    std::string bracket;
};

DiscreteDistribution resolve_distribution(const CommonArgs& c) {
    require(c.dist.empty() != c.atoms.empty(),
            "provide exactly one of --dist or --atoms");
    if (!c.atoms.empty()) return parse_atoms_arg(c.atoms);
    return sample(parse_dist_arg(c.dist), c.k, c.seed);
}

std::optional<Interval> resolve_bracket(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto parts = split(s, ':');
    require(parts.size() == 2, "bracket must be lo:hi");
    return Interval{to_num(parts[0]), to_num(parts[1])};
}

int cmd_certainty(const CommonArgs& c, bool modified) {
    const auto t0 = std::chrono::steady_clock::now();
    auto d = resolve_distribution(c);
    auto u = parse_utility_arg(c.utility);
    auto res = modified ? moce(d, u, resolve_bracket(c.bracket))
                        : oce(d, u, resolve_bracket(c.bracket));
    std::cout << ce_result_json(modified ? "moce" : "oce", res,
                                seconds_since(t0))
                     .dump(2)
              << '\n';
    return 0;
}

int cmd_cvar(const CommonArgs& c, double alpha) {
    auto d = resolve_distribution(c);
    json j;
    j["command"] = "cvar";
    j["alpha"] = alpha;
    j["cvar"] = cvar(d, alpha);
    j["cvar_via_oce"] = cvar_via_oce(d, alpha);
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_kdist(const std::string& u_path, const std::string& v_path) {
    auto u = plu_from_json(read_text_file(u_path));
    auto v = plu_from_json(read_text_file(v_path));
    json j;
    j["command"] = "kdist";
    j["closed_form"] = distance_closed_form(u, v);
    j["primal_lp"] = distance_primal_lp(u, v);
    j["dual_lp"] = distance_dual_lp(u, v);
    std::cout << j.dump(2) << '\n';
    return 0;
}

RmoceConfig apply_overrides(RmoceConfig cfg, const CLI::App* cmd,
                            const std::string& dist, std::size_t k,
                            std::uint64_t seed, double alpha, std::size_t n,
                            double lip, double radius,
                            const std::string& x_policy) {
    if (cmd->count("--dist")) cfg.spec = parse_dist_arg(dist);
    if (cmd->count("--k")) cfg.sample_count = k;
    if (cmd->count("--seed")) cfg.seed = seed;
    if (cmd->count("--alpha")) cfg.alpha = alpha;
    if (cmd->count("--breakpoints")) cfg.breakpoints = n;
    if (cmd->count("--lipschitz")) cfg.lipschitz = lip;
    if (cmd->count("--radius")) cfg.radius = radius;
    if (cmd->count("--x-policy")) {
        if (x_policy == "half") {
            cfg.x_policy = XPolicy::Half;
        } else if (x_policy == "prop32") {
            cfg.x_policy = XPolicy::Prop32;
        } else {
            auto parts = split(x_policy, ':');
            require(parts.size() == 2, "x-policy must be prop32, half or lo:hi");
            cfg.x_policy = XPolicy::Explicit;
            cfg.x_explicit = {to_num(parts[0]), to_num(parts[1])};
        }
    }
    return cfg;
}

int cmd_rmoce(const RmoceConfig& cfg, const std::string& out_dir,
              bool alternating) {
    const auto t0 = std::chrono::steady_clock::now();
    auto built = build_problem(cfg);
    auto sol = alternating ? solve_alternating(built.problem)
                           : solve_direct(built.problem);
    const double bound = error_bound(cfg.lipschitz, built.grid);
    auto doc = rmoce_solution_to_json(sol, built, bound, seconds_since(t0));
    write_text_file(out_path(out_dir, "rmoce_solution.json"), doc);
    write_text_file(out_path(out_dir, "worst_utility.csv"),
                    plu_to_csv(sol.worst_utility));
    std::cout << doc << '\n';
    return 0;
}

int cmd_sweep(const RmoceConfig& cfg, const std::string& out_dir,
              const std::string& radii_arg, const std::string& n_list_arg) {
    require(radii_arg.empty() != n_list_arg.empty(),
            "provide exactly one of --radii or --n-list");
    if (!radii_arg.empty()) {
        auto radii = parse_number_list(radii_arg);
        auto built = build_problem(cfg);
        std::ostringstream os;
        os.precision(10);
        os << "radius,value,x_star,supnorm_gap,runtime_seconds\n";
        for (std::size_t i = 0; i < radii.size(); ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            auto series = radius_sweep(built.problem.dist,
                                       built.problem.ball.center,
                                       built.problem.x_domain, {radii[i]});
            const auto& pt = series.front();
            os << pt.radius << ',' << pt.value << ',' << pt.x_star << ','
               << pt.worst.sup_gap(built.problem.ball.center) << ','
               << seconds_since(t0) << '\n';
            write_text_file(
                out_path(out_dir, "worst_utility_r" + std::to_string(i) + ".csv"),
                plu_to_csv(pt.worst));
        }
        write_text_file(out_path(out_dir, "radius_sweep.csv"), os.str());
        std::cout << os.str();
        return 0;
    }
    auto ns = parse_number_list(n_list_arg);
    std::ostringstream os;
    os.precision(10);
    os << "N,value,x_star,error_bound,runtime_seconds\n";
    for (double nd : ns) {
        auto cfg_n = cfg;
        cfg_n.breakpoints = std::size_t(nd);
        const auto t0 = std::chrono::steady_clock::now();
        auto built = build_problem(cfg_n);
        auto sol = solve_direct(built.problem);
        os << cfg_n.breakpoints << ',' << sol.value << ',' << sol.x_star << ','
           << error_bound(cfg_n.lipschitz, built.grid) << ','
           << seconds_since(t0) << '\n';
    }
    write_text_file(out_path(out_dir, "breakpoint_sweep.csv"), os.str());
    std::cout << os.str();
    return 0;
}

int cmd_robustness(const RobustnessConfig& cfg, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    auto rep = robustness_check(cfg);
    auto doc = robustness_report_to_json(rep, cfg.seed, seconds_since(t0));
    write_text_file(out_path(out_dir, "robustness_report.json"), doc);
    write_text_file(out_path(out_dir, "estimator_values.csv"),
                    robustness_values_to_csv(rep));
    std::cout << doc << '\n';
    return 0;
}

int cmd_table1(std::uint64_t seed, const std::string& out_dir) {
    auto csv = table1_csv(table1_rows(seed));
    write_text_file(out_path(out_dir, "table1.csv"), csv);
    std::cout << csv;
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Certainty-equivalent and robust certainty-equivalent solver"};
    app.require_subcommand(1);
    // let --out (defined on the parent) appear after the subcommand name
    app.fallthrough();

    std::string out_dir = ".";
    app.add_option("--out", out_dir, "output directory for generated files");

    CommonArgs common;
    double alpha_level = 0.2;

    auto add_common = [&](CLI::App* cmd, bool with_utility) {
        cmd->add_option("--dist", common.dist,
                        "distribution (kind:params or file)");
        cmd->add_option("--atoms", common.atoms,
                        "explicit atoms (range, list or csv:file)");
        cmd->add_option("--k", common.k, "sample size for --dist");
        cmd->add_option("--seed", common.seed, "sampling seed");
        if (with_utility) {
            cmd->add_option("--utility", common.utility,
                            "utility (exp:a[:s[:c]] or twopiece:g1:g2)");
            cmd->add_option("--bracket", common.bracket, "search bracket lo:hi");
        }
    };

    auto* moce_cmd = app.add_subcommand("moce", "modified certainty equivalent");
    add_common(moce_cmd, true);
    auto* oce_cmd = app.add_subcommand("oce", "plain certainty equivalent");
    add_common(oce_cmd, true);
    auto* cvar_cmd = app.add_subcommand("cvar", "conditional value at risk of -xi");
    add_common(cvar_cmd, false);
    cvar_cmd->add_option("--alpha", alpha_level, "tail level in (0,1)")
        ->required();

    std::string u_path, v_path;
    auto* kdist_cmd =
        app.add_subcommand("kdist", "Kantorovich distance between two utilities");
    kdist_cmd->add_option("--u", u_path, "utility json file")->required();
    kdist_cmd->add_option("--v", v_path, "utility json file")->required();

    std::string config_path, dist_arg, x_policy, radii_arg, n_list_arg;
    std::size_t k_arg = 100, n_arg = 10;
    std::uint64_t seed_arg = 42;
    double alpha_arg = 2.0, lip_arg = 30.0, radius_arg = 0.05;
    bool alternating = false;

    auto add_rmoce_opts = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "json problem config");
        cmd->add_option("--dist", dist_arg, "distribution (kind:params or file)");
        cmd->add_option("--k", k_arg, "sample size");
        cmd->add_option("--seed", seed_arg, "sampling seed");
        cmd->add_option("--alpha", alpha_arg, "nominal utility curvature");
        cmd->add_option("--breakpoints", n_arg, "grid breakpoints");
        cmd->add_option("--lipschitz", lip_arg, "class Lipschitz modulus");
        cmd->add_option("--radius", radius_arg, "ball radius");
        cmd->add_option("--x-policy", x_policy, "prop32 | half | lo:hi");
    };
    auto* rmoce_cmd = app.add_subcommand("rmoce", "robust certainty equivalent");
    add_rmoce_opts(rmoce_cmd);
    rmoce_cmd->add_flag("--alternating", alternating,
                        "use the alternating solver instead of direct search");
    auto* sweep_cmd = app.add_subcommand("sweep", "radius or breakpoint sweep");
    add_rmoce_opts(sweep_cmd);
    sweep_cmd->add_option("--radii", radii_arg, "comma list of radii");
    sweep_cmd->add_option("--n-list", n_list_arg, "comma list of breakpoints");

    std::string noise_arg = "dirac:0.5";
    double mix_eps = 0.1;
    std::size_t n_samples = 50, m_reps = 200, rb_breakpoints = 10;
    double rb_lip = 0.0, rb_alpha = 2.0, rb_radius = 0.0;
    bool rb_rmoce = false;
    std::string rb_dist = "uniform:-1:1";
    std::uint64_t rb_seed = 42;
    auto* rob_cmd =
        app.add_subcommand("robustness", "estimator stability under contamination");
    rob_cmd->add_option("--dist", rb_dist, "base distribution");
    rob_cmd->add_option("--epsilon", mix_eps, "contamination weight in [0,1]");
    rob_cmd->add_option("--noise", noise_arg, "additive noise distribution");
    rob_cmd->add_option("--n", n_samples, "sample size per replication");
    rob_cmd->add_option("--m", m_reps, "replications");
    rob_cmd->add_option("--lipschitz", rb_lip, "modulus for the bound (0: auto)");
    rob_cmd->add_option("--alpha", rb_alpha, "nominal utility curvature");
    rob_cmd->add_option("--breakpoints", rb_breakpoints, "grid breakpoints");
    rob_cmd->add_option("--radius", rb_radius, "ball radius for the estimator");
    rob_cmd->add_flag("--rmoce", rb_rmoce, "robust estimator instead of plain");
    rob_cmd->add_option("--seed", rb_seed, "master seed");

    std::uint64_t t1_seed = 42;
    auto* t1_cmd =
        app.add_subcommand("reproduce-table1", "regenerate the comparison table");
    t1_cmd->add_option("--seed", t1_seed, "sampling seed");

    std::vector<std::string> argv(args);
    try {
        app.parse(std::vector<std::string>(argv.rbegin(), argv.rend()));
        if (moce_cmd->parsed()) return cmd_certainty(common, true);
        if (oce_cmd->parsed()) return cmd_certainty(common, false);
        if (cvar_cmd->parsed()) return cmd_cvar(common, alpha_level);
        if (kdist_cmd->parsed()) return cmd_kdist(u_path, v_path);
        if (rmoce_cmd->parsed() || sweep_cmd->parsed()) {
            RmoceConfig cfg;
            if (!config_path.empty())
                cfg = rmoce_config_from_json(read_text_file(config_path));
            const CLI::App* cmd = rmoce_cmd->parsed()
                                      ? static_cast<CLI::App*>(rmoce_cmd)
                                      : static_cast<CLI::App*>(sweep_cmd);
            cfg = apply_overrides(cfg, cmd, dist_arg, k_arg, seed_arg, alpha_arg,
                                  n_arg, lip_arg, radius_arg, x_policy);
            if (rmoce_cmd->parsed()) return cmd_rmoce(cfg, out_dir, alternating);
            return cmd_sweep(cfg, out_dir, radii_arg, n_list_arg);
        }
        if (rob_cmd->parsed()) {
            RobustnessConfig cfg;
            cfg.base = parse_dist_arg(rb_dist);
            cfg.contamination = {mix_eps, parse_dist_arg(noise_arg)};
            cfg.sample_size = n_samples;
            cfg.replications = m_reps;
            cfg.lipschitz = rb_lip;
            cfg.alpha = rb_alpha;
            cfg.breakpoints = rb_breakpoints;
            cfg.radius = rb_radius;
            cfg.use_rmoce = rb_rmoce;
            cfg.seed = rb_seed;
            return cmd_robustness(cfg, out_dir);
        }
        if (t1_cmd->parsed()) return cmd_table1(t1_seed, out_dir);
        std::cerr << "no subcommand given\n";
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 2;
    }
}

} // namespace certeq
