#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <rieszeq/iba.hpp>
#include <rieszeq/verify.hpp>

namespace rieszeq {

inline constexpr const char* cli_version = "1.0.0";

enum class Command {
    endpoint,
    density,
    signed_measure,
    sigma,
    functional,
    iba,
    verify,
    logcase
};

struct RunConfig {
    Command command = Command::endpoint;
    double s = 0.5;
    double q = 0.0;
    double b = 0.0;
    double a = 0.0;
    double a0 = 0.0;
    double a_min = 0.0;
    double a_max = 0.0;
    int n = 101;
    int max_iter = 200;
    int grid_n = 1001;
    double tol = 0.0;
    std::string output_path;
    std::string format;
};

inline void to_json(nlohmann::json& j, const SolverReport& r) {
    j = nlohmann::json{{"a_tilde", r.a_tilde},
                       {"c", r.c},
                       {"d", r.d},
                       {"m_a_tilde", r.m_a_tilde},
                       {"mass_loss", r.mass_loss},
                       {"f_q", r.F_Q},
                       {"ms_value", r.ms_value},
                       {"per_method", r.per_method},
                       {"consensus_spread", r.consensus_spread}};
}

inline void from_json(const nlohmann::json& j, SolverReport& r) {
    j.at("a_tilde").get_to(r.a_tilde);
    j.at("c").get_to(r.c);
    j.at("d").get_to(r.d);
    j.at("m_a_tilde").get_to(r.m_a_tilde);
    j.at("mass_loss").get_to(r.mass_loss);
    j.at("f_q").get_to(r.F_Q);
    j.at("ms_value").get_to(r.ms_value);
    j.at("per_method").get_to(r.per_method);
    j.at("consensus_spread").get_to(r.consensus_spread);
}

inline IBAStop iba_stop_from_string(const std::string& name) {
    for (IBAStop reason : {IBAStop::converged, IBAStop::positive_everywhere,
                           IBAStop::max_iterations, IBAStop::non_shrinking})
        if (name == to_string(reason)) return reason;
    throw domain_error("unknown stop reason '" + name + "'");
}

// limit_halfwidth is +inf for a non-shrinking auto-started run; JSON has no
// infinity literal, so that one value travels as the string "inf".
inline void to_json(nlohmann::json& j, const IBATrace& t) {
    j = nlohmann::json{{"a_sequence", t.a_sequence},
                       {"coeff_sequence", t.coeff_sequence},
                       {"stop_reason", to_string(t.stop_reason)}};
    if (std::isinf(t.limit_halfwidth))
        j["limit_halfwidth"] = "inf";
    else
        j["limit_halfwidth"] = t.limit_halfwidth;
}

inline void from_json(const nlohmann::json& j, IBATrace& t) {
    j.at("a_sequence").get_to(t.a_sequence);
    j.at("coeff_sequence").get_to(t.coeff_sequence);
    t.stop_reason = iba_stop_from_string(j.at("stop_reason").get<std::string>());
    const nlohmann::json& lh = j.at("limit_halfwidth");
    t.limit_halfwidth = lh.is_string() ? std::numeric_limits<double>::infinity()
                                       : lh.get<double>();
}

inline void to_json(nlohmann::json& j, const FrostmanReport& r) {
    j = nlohmann::json{{"on_support_max", r.on_support_max},
                       {"on_support_min", r.on_support_min},
                       {"constancy_gap", r.constancy_gap},
                       {"off_support_min_excess", r.off_support_min_excess},
                       {"f_q_used", r.F_Q_used}};
}

inline void from_json(const nlohmann::json& j, FrostmanReport& r) {
    j.at("on_support_max").get_to(r.on_support_max);
    j.at("on_support_min").get_to(r.on_support_min);
    j.at("constancy_gap").get_to(r.constancy_gap);
    j.at("off_support_min_excess").get_to(r.off_support_min_excess);
    j.at("f_q_used").get_to(r.F_Q_used);
}

namespace detail {

inline std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using HeaderFields = std::vector<std::pair<std::string, std::string>>;

inline void csv_header(std::ostream& os, const std::string& command,
                       const HeaderFields& fields) {
    os << "# riesz-equilibrium " << cli_version << "\n";
    os << "# command: " << command << "\n";
    for (const auto& [key, value] : fields) os << "# " << key << ": " << value << "\n";
}

inline void csv_table(std::ostream& os, const char* col1, const char* col2,
                      const std::vector<double>& xs, const std::vector<double>& ys) {
    os << col1 << ',' << col2 << '\n';
    for (std::size_t i = 0; i < xs.size(); ++i)
        os << num17(xs[i]) << ',' << num17(ys[i]) << '\n';
}

// Chebyshev-distributed abscissas on [-a, a], ascending, clustering at the
// endpoints. Mirrored pairs are exact negations so even densities sample
// symmetrically, and the extreme points land on +-a exactly.
inline std::vector<double> chebyshev_grid(double a, int n) {
    if (n < 2) throw domain_error("grid needs at least two points");
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int j = 0; 2 * j < n - 1; ++j) {
        const double t = std::cos(M_PI * j / (n - 1));
        xs[static_cast<std::size_t>(j)] = -a * t;
        xs[static_cast<std::size_t>(n - 1 - j)] = a * t;
    }
    if (n % 2 == 1) xs[static_cast<std::size_t>((n - 1) / 2)] = 0.0;
    return xs;
}

template <class Density>
std::vector<double> sample(const Density& den, const std::vector<double>& xs) {
    std::vector<double> vals;
    vals.reserve(xs.size());
    for (double x : xs) vals.push_back(den.evaluate(x));
    return vals;
}

inline HeaderFields field_params(const RunConfig& cfg) {
    return {{"s", num17(cfg.s)}, {"q", num17(cfg.q)}, {"b", num17(cfg.b)}};
}

inline int cmd_endpoint(const RunConfig& cfg, std::ostream& os) {
    const SolverReport r = critical_endpoint(FieldParams{cfg.s, cfg.q, cfg.b});
    if (cfg.format == "csv") {
        csv_header(os, "endpoint", field_params(cfg));
        os << "key,value\n";
        os << "a_tilde," << num17(r.a_tilde) << '\n';
        os << "c," << num17(r.c) << '\n';
        os << "d," << num17(r.d) << '\n';
        os << "m_a_tilde," << num17(r.m_a_tilde) << '\n';
        os << "mass_loss," << num17(r.mass_loss) << '\n';
        os << "f_q," << num17(r.F_Q) << '\n';
        os << "ms_value," << num17(r.ms_value) << '\n';
        os << "consensus_spread," << num17(r.consensus_spread) << '\n';
        for (const auto& [name, value] : r.per_method)
            os << "per_method." << name << ',' << num17(value) << '\n';
    } else {
        os << nlohmann::json(r).dump(2) << '\n';
    }
    return 0;
}

inline int cmd_density(const RunConfig& cfg, std::ostream& os) {
    const FieldParams p{cfg.s, cfg.q, cfg.b};
    const double at = halfwidth_from_c(critical_c(p), p.b);
    const IntervalDensity den = equilibrium_density(p, at);
    const double fq = equilibrium_constant(p);
    const std::vector<double> xs = chebyshev_grid(at, cfg.grid_n);
    const std::vector<double> vals = sample(den, xs);
    if (cfg.format == "csv") {
        HeaderFields fields = field_params(cfg);
        fields.emplace_back("a_tilde", num17(at));
        fields.emplace_back("f_q", num17(fq));
        fields.emplace_back("mass", num17(den.mass()));
        csv_header(os, "density", fields);
        csv_table(os, "x", "density", xs, vals);
    } else {
        nlohmann::json j{{"s", cfg.s},     {"q", cfg.q}, {"b", cfg.b},
                         {"a_tilde", at},  {"f_q", fq},  {"x", xs},
                         {"density", vals}};
        os << j.dump(2) << '\n';
    }
    return 0;
}

inline int cmd_signed(const RunConfig& cfg, std::ostream& os) {
    const FieldParams p{cfg.s, cfg.q, cfg.b};
    const SignedDensityReport r = signed_eq_density(p, cfg.a);
    const std::vector<double> xs = chebyshev_grid(cfg.a, cfg.grid_n);
    const std::vector<double> vals = sample(r.density, xs);
    if (cfg.format == "csv") {
        HeaderFields fields = field_params(cfg);
        fields.emplace_back("a", num17(cfg.a));
        fields.emplace_back("endpoint_coefficient", num17(r.endpoint_coefficient));
        fields.emplace_back("positive_halfwidth", num17(r.positive_halfwidth));
        fields.emplace_back("balayage_mass", num17(r.balayage_mass));
        csv_header(os, "signed", fields);
        csv_table(os, "x", "density", xs, vals);
    } else {
        nlohmann::json j{{"s", cfg.s},
                         {"q", cfg.q},
                         {"b", cfg.b},
                         {"a", cfg.a},
                         {"endpoint_coefficient", r.endpoint_coefficient},
                         {"positive_halfwidth", r.positive_halfwidth},
                         {"balayage_mass", r.balayage_mass},
                         {"x", xs},
                         {"density", vals}};
        os << j.dump(2) << '\n';
    }
    return 0;
}

inline int cmd_sigma(const RunConfig& cfg, std::ostream& os) {
    const FieldParams p{cfg.s, cfg.q, cfg.b};
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-9;
    const IntervalDensity den = sigma_density(p, cfg.a);
    const double mass = sigma_mass(p, cfg.a, tol);
    const std::vector<double> xs = chebyshev_grid(cfg.a, cfg.grid_n);
    const std::vector<double> vals = sample(den, xs);
    if (cfg.format == "csv") {
        HeaderFields fields = field_params(cfg);
        fields.emplace_back("a", num17(cfg.a));
        fields.emplace_back("mass", num17(mass));
        fields.emplace_back("tol", num17(tol));
        csv_header(os, "sigma", fields);
        csv_table(os, "x", "density", xs, vals);
    } else {
        nlohmann::json j{{"s", cfg.s},   {"q", cfg.q}, {"b", cfg.b},
                         {"a", cfg.a},   {"mass", mass}, {"x", xs},
                         {"density", vals}};
        os << j.dump(2) << '\n';
    }
    return 0;
}

inline int cmd_functional(const RunConfig& cfg, std::ostream& os) {
    const FieldParams p{cfg.s, cfg.q, cfg.b};
    check_params(p);
    if (!(cfg.a_min > 0.0)) throw domain_error("a-min must be positive");
    if (!(cfg.a_max >= cfg.a_min)) throw domain_error("a-max must be at least a-min");
    if (cfg.n < 2) throw domain_error("sample count must be at least 2");
    const double ratio = cfg.a_max / cfg.a_min;
    std::vector<double> as(static_cast<std::size_t>(cfg.n));
    std::vector<double> vals(as.size());
    for (int i = 0; i < cfg.n; ++i) {
        as[static_cast<std::size_t>(i)] =
            cfg.a_min * std::pow(ratio, static_cast<double>(i) / (cfg.n - 1));
        vals[static_cast<std::size_t>(i)] = ms_functional(p, as[static_cast<std::size_t>(i)]);
    }
    if (cfg.format == "csv") {
        HeaderFields fields = field_params(cfg);
        fields.emplace_back("a_min", num17(cfg.a_min));
        fields.emplace_back("a_max", num17(cfg.a_max));
        fields.emplace_back("spacing", "geometric");
        csv_header(os, "functional", fields);
        csv_table(os, "a", "functional", as, vals);
    } else {
        nlohmann::json j{{"s", cfg.s}, {"q", cfg.q},      {"b", cfg.b},
                         {"a", as},    {"functional", vals}};
        os << j.dump(2) << '\n';
    }
    return 0;
}

inline int cmd_iba(const RunConfig& cfg, std::ostream& os) {
    const FieldParams p{cfg.s, cfg.q, cfg.b};
    const double stop_tol = cfg.tol > 0.0 ? cfg.tol : 1e-8;
    if (cfg.a0 < 0.0) throw domain_error("start half-width must be nonnegative");
    const IBATrace t = run_iba(p, cfg.a0, stop_tol, cfg.max_iter);
    if (cfg.format == "csv") {
        HeaderFields fields = field_params(cfg);
        fields.emplace_back("stop_tol", num17(stop_tol));
        fields.emplace_back("stop_reason", to_string(t.stop_reason));
        fields.emplace_back("limit_halfwidth", num17(t.limit_halfwidth));
        csv_header(os, "iba", fields);
        os << "k,a,coeff\n";
        for (std::size_t k = 0; k < t.a_sequence.size(); ++k) {
            os << k << ',' << num17(t.a_sequence[k]) << ',';
            if (k < t.coeff_sequence.size()) os << num17(t.coeff_sequence[k]);
            os << '\n';
        }
    } else {
        os << nlohmann::json(t).dump(2) << '\n';
    }
    return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& os) {
    const FieldParams p{cfg.s, cfg.q, cfg.b};
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-6;
    const double at = halfwidth_from_c(critical_c(p), p.b);
    const IntervalDensity den = equilibrium_density(p, at);
    const FrostmanReport fr =
        frostman_report(p, den, equilibrium_constant(p), cfg.grid_n, tol);
    const double left = endpoint_exponent_fit(den, Side::left);
    const double right = endpoint_exponent_fit(den, Side::right);
    const double expected = 0.5 * (1.0 + cfg.s);
    const bool passed = fr.constancy_gap <= tol * std::fabs(fr.F_Q_used) &&
                        fr.off_support_min_excess > 0.0 &&
                        std::fabs(left - expected) < 0.05 &&
                        std::fabs(right - expected) < 0.05;
    if (cfg.format == "csv") {
        HeaderFields fields = field_params(cfg);
        fields.emplace_back("tol", num17(tol));
        csv_header(os, "verify", fields);
        os << "key,value\n";
        os << "a_tilde," << num17(at) << '\n';
        os << "on_support_max," << num17(fr.on_support_max) << '\n';
        os << "on_support_min," << num17(fr.on_support_min) << '\n';
        os << "constancy_gap," << num17(fr.constancy_gap) << '\n';
        os << "off_support_min_excess," << num17(fr.off_support_min_excess) << '\n';
        os << "f_q_used," << num17(fr.F_Q_used) << '\n';
        os << "edge_exponent_left," << num17(left) << '\n';
        os << "edge_exponent_right," << num17(right) << '\n';
        os << "edge_exponent_expected," << num17(expected) << '\n';
        os << "passed," << (passed ? "true" : "false") << '\n';
    } else {
        nlohmann::json j(fr);
        j["a_tilde"] = at;
        j["edge_exponent_left"] = left;
        j["edge_exponent_right"] = right;
        j["edge_exponent_expected"] = expected;
        j["passed"] = passed;
        os << j.dump(2) << '\n';
    }
    return passed ? 0 : 3;
}

inline int cmd_logcase(const RunConfig& cfg, std::ostream& os) {
    const LogCaseReference ref = log_case_reference(cfg.q, cfg.b);
    const std::vector<double> xs = chebyshev_grid(ref.a_tilde, cfg.grid_n);
    const std::vector<double> vals = sample(ref.density, xs);
    if (cfg.format == "csv") {
        HeaderFields fields{{"q", num17(cfg.q)}, {"b", num17(cfg.b)}};
        fields.emplace_back("a_tilde", num17(ref.a_tilde));
        fields.emplace_back("mass", num17(ref.density.mass()));
        csv_header(os, "logcase", fields);
        csv_table(os, "x", "density", xs, vals);
    } else {
        nlohmann::json j{{"q", cfg.q},
                         {"b", cfg.b},
                         {"a_tilde", ref.a_tilde},
                         {"x", xs},
                         {"density", vals}};
        os << j.dump(2) << '\n';
    }
    return 0;
}

}  // namespace detail

// Full command-line front end, callable in-process. args excludes the program
// name. Returns the process exit status: 0 success, 2 domain error, 3
// consistency or verification failure, 64 usage error.
inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
    CLI::App app{"Riesz equilibrium measures on the real axis under an attracting point charge"};
    app.name("riesz");
    app.set_version_flag("--version", cli_version);
    app.require_subcommand(1);

    RunConfig cfg;

    auto add_field = [&cfg](CLI::App* sub) {
        sub->add_option("--s", cfg.s, "kernel exponent in (0, 1)")->required();
        sub->add_option("--q", cfg.q, "charge strength")->required();
        sub->add_option("--b", cfg.b, "charge height above the axis")->required();
    };
    auto add_output = [&cfg](CLI::App* sub) {
        sub->add_option("--out", cfg.output_path, "write the artifact to this file");
        sub->add_option("--format", cfg.format, "output format, csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_grid = [&cfg](CLI::App* sub) {
        sub->add_option("--grid-n", cfg.grid_n, "number of sample abscissas");
    };

    CLI::App* sub_endpoint = app.add_subcommand(
        "endpoint", "critical half-width with three-route consensus");
    add_field(sub_endpoint);
    add_output(sub_endpoint);

    CLI::App* sub_density =
        app.add_subcommand("density", "equilibrium density on its support");
    add_field(sub_density);
    add_grid(sub_density);
    add_output(sub_density);

    CLI::App* sub_signed = app.add_subcommand(
        "signed", "signed equilibrium density on a fixed interval");
    add_field(sub_signed);
    sub_signed->add_option("--a", cfg.a, "interval half-width")->required();
    add_grid(sub_signed);
    add_output(sub_signed);

    CLI::App* sub_sigma = app.add_subcommand(
        "sigma", "attracted part of the signed density, with its mass");
    add_field(sub_sigma);
    sub_sigma->add_option("--a", cfg.a, "interval half-width")->required();
    sub_sigma->add_option("--tol", cfg.tol, "mass quadrature tolerance")
        ->check(CLI::PositiveNumber);
    add_grid(sub_sigma);
    add_output(sub_sigma);

    CLI::App* sub_functional = app.add_subcommand(
        "functional", "interval functional sampled on a geometric half-width grid");
    add_field(sub_functional);
    sub_functional->add_option("--a-min", cfg.a_min, "smallest half-width")->required();
    sub_functional->add_option("--a-max", cfg.a_max, "largest half-width")->required();
    sub_functional->add_option("--n", cfg.n, "number of samples");
    add_output(sub_functional);

    CLI::App* sub_iba = app.add_subcommand(
        "iba", "iterated balayage trace from a starting half-width");
    add_field(sub_iba);
    sub_iba->add_option("--a0", cfg.a0, "starting half-width, 0 = auto");
    sub_iba->add_option("--tol", cfg.tol, "stop tolerance")->check(CLI::PositiveNumber);
    sub_iba->add_option("--n", cfg.max_iter, "iteration budget");
    add_output(sub_iba);

    CLI::App* sub_verify = app.add_subcommand(
        "verify", "equilibrium conditions and edge exponents check");
    add_field(sub_verify);
    sub_verify->add_option("--tol", cfg.tol, "constancy tolerance")
        ->check(CLI::PositiveNumber);
    add_grid(sub_verify);
    add_output(sub_verify);

    CLI::App* sub_logcase = app.add_subcommand(
        "logcase", "logarithmic-kernel reference half-width and density");
    sub_logcase->add_option("--q", cfg.q, "charge strength")->required();
    sub_logcase->add_option("--b", cfg.b, "charge height above the axis")->required();
    add_grid(sub_logcase);
    add_output(sub_logcase);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 64;
    }

    const std::vector<std::pair<CLI::App*, Command>> commands{
        {sub_endpoint, Command::endpoint},   {sub_density, Command::density},
        {sub_signed, Command::signed_measure}, {sub_sigma, Command::sigma},
        {sub_functional, Command::functional}, {sub_iba, Command::iba},
        {sub_verify, Command::verify},       {sub_logcase, Command::logcase}};
    CLI::App* active = nullptr;
    for (const auto& [sub, id] : commands)
        if (sub->parsed()) {
            active = sub;
            cfg.command = id;
        }
    if (active == nullptr) {
        err << "error: no command selected\n";
        return 64;
    }
    const bool report_command = cfg.command == Command::endpoint ||
                                cfg.command == Command::iba ||
                                cfg.command == Command::verify;
    if (cfg.format.empty()) cfg.format = report_command ? "json" : "csv";
    if (cfg.command == Command::verify && active->count("--grid-n") == 0)
        cfg.grid_n = 101;

    try {
        std::ofstream file;
        std::ostream* sink = &out;
        if (!cfg.output_path.empty()) {
            file.open(cfg.output_path);
            if (!file) throw domain_error("cannot open output file " + cfg.output_path);
            sink = &file;
        }
        switch (cfg.command) {
            case Command::endpoint: return detail::cmd_endpoint(cfg, *sink);
            case Command::density: return detail::cmd_density(cfg, *sink);
            case Command::signed_measure: return detail::cmd_signed(cfg, *sink);
            case Command::sigma: return detail::cmd_sigma(cfg, *sink);
            case Command::functional: return detail::cmd_functional(cfg, *sink);
            case Command::iba: return detail::cmd_iba(cfg, *sink);
            case Command::verify: return detail::cmd_verify(cfg, *sink);
            case Command::logcase: return detail::cmd_logcase(cfg, *sink);
        }
        err << "error: no command selected\n";
        return 64;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace rieszeq
