#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rieszeq/cli.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace rieszeq;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<std::string> data_rows(const std::string& text) {
    std::vector<std::string> rows;
    bool past_columns = false;
    for (const std::string& line : lines_of(text)) {
        if (line.empty() || line[0] == '#') continue;
        if (!past_columns) {
            past_columns = true;
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

std::string header_value(const std::string& text, const std::string& key) {
    const std::string prefix = "# " + key + ": ";
    for (const std::string& line : lines_of(text))
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    return {};
}

std::pair<double, double> split_row(const std::string& row) {
    const std::size_t comma = row.find(',');
    REQUIRE(comma != std::string::npos);
    return {std::stod(row.substr(0, comma)), std::stod(row.substr(comma + 1))};
}

}  // namespace

TEST_CASE("endpoint emits the solver report as json") {
    const CliResult r = run({"endpoint", "--s", "0.5", "--q", "5", "--b", "1"});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(std::fabs(j.at("a_tilde").get<double>() - 1.44227) < 1e-4);
    CHECK(j.at("consensus_spread").get<double>() <
          1e-6 * j.at("a_tilde").get<double>());
    CHECK(j.at("per_method").size() == 3);

    SolverReport parsed = j.get<SolverReport>();
    CHECK(nlohmann::json(parsed) == j);
}

TEST_CASE("report records round-trip through json with value equality") {
    SolverReport sr;
    sr.a_tilde = 1.25;
    sr.c = 0.3;
    sr.d = 1.5;
    sr.m_a_tilde = 0.57;
    sr.mass_loss = 0.43;
    sr.F_Q = -2.7182818284590452;
    sr.ms_value = -2.75;
    sr.per_method = {{"critical_equation", 1.25}, {"sigma_mass", 1.25000001}};
    sr.consensus_spread = 1e-8;
    const SolverReport sr2 =
        nlohmann::json::parse(nlohmann::json(sr).dump()).get<SolverReport>();
    CHECK(sr2.a_tilde == sr.a_tilde);
    CHECK(sr2.c == sr.c);
    CHECK(sr2.d == sr.d);
    CHECK(sr2.m_a_tilde == sr.m_a_tilde);
    CHECK(sr2.mass_loss == sr.mass_loss);
    CHECK(sr2.F_Q == sr.F_Q);
    CHECK(sr2.ms_value == sr.ms_value);
    CHECK(sr2.per_method == sr.per_method);
    CHECK(sr2.consensus_spread == sr.consensus_spread);

    IBATrace tr;
    tr.a_sequence = {4.0, 2.25, 1.5};
    tr.coeff_sequence = {-0.28, -0.16};
    tr.stop_reason = IBAStop::max_iterations;
    tr.limit_halfwidth = 1.5;
    const IBATrace tr2 =
        nlohmann::json::parse(nlohmann::json(tr).dump()).get<IBATrace>();
    CHECK(tr2.a_sequence == tr.a_sequence);
    CHECK(tr2.coeff_sequence == tr.coeff_sequence);
    CHECK(tr2.stop_reason == tr.stop_reason);
    CHECK(tr2.limit_halfwidth == tr.limit_halfwidth);

    tr.limit_halfwidth = std::numeric_limits<double>::infinity();
    const IBATrace tr3 =
        nlohmann::json::parse(nlohmann::json(tr).dump()).get<IBATrace>();
    CHECK(std::isinf(tr3.limit_halfwidth));
    CHECK(tr3.limit_halfwidth > 0.0);

    FrostmanReport fr;
    fr.on_support_max = -2.848946607;
    fr.on_support_min = -2.848946781;
    fr.constancy_gap = 1.74e-7;
    fr.off_support_min_excess = 0.052;
    fr.F_Q_used = -2.84894682593854;
    const FrostmanReport fr2 =
        nlohmann::json::parse(nlohmann::json(fr).dump()).get<FrostmanReport>();
    CHECK(fr2.on_support_max == fr.on_support_max);
    CHECK(fr2.on_support_min == fr.on_support_min);
    CHECK(fr2.constancy_gap == fr.constancy_gap);
    CHECK(fr2.off_support_min_excess == fr.off_support_min_excess);
    CHECK(fr2.F_Q_used == fr.F_Q_used);
}

TEST_CASE("density csv is deterministic, symmetric, and zero at the edges") {
    const std::vector<std::string> args{"density", "--s",      "0.5", "--q", "2",
                                        "--b",     "1",        "--grid-n", "5"};
    const CliResult r1 = run(args);
    const CliResult r2 = run(args);
    CHECK(r1.code == 0);
    CHECK(r1.out == r2.out);

    const std::vector<std::string> rows = data_rows(r1.out);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto [x, v] = split_row(rows[i]);
        const auto [xm, vm] = split_row(rows[rows.size() - 1 - i]);
        CHECK(x == -xm);
        CHECK(v == vm);
    }
    const double a_tilde = std::stod(header_value(r1.out, "a_tilde"));
    const auto [x0, v0] = split_row(rows.front());
    const auto [x4, v4] = split_row(rows.back());
    CHECK(x0 == -a_tilde);
    CHECK(x4 == a_tilde);
    CHECK(v0 == 0.0);
    CHECK(v4 == 0.0);
    const auto [xmid, vmid] = split_row(rows[2]);
    CHECK(xmid == 0.0);
    CHECK(vmid > 0.0);

    // every cell carries enough digits to reparse to the exact double
    for (const std::string& row : rows) {
        const std::string cell = row.substr(0, row.find(','));
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", std::stod(cell));
        CHECK(cell == buf);
    }

    // the header block carries parameters and version, never a timestamp
    const std::vector<std::string> all = lines_of(r1.out);
    CHECK(all.front() == std::string("# riesz-equilibrium ") + cli_version);
    CHECK(header_value(r1.out, "command") == "density");
    CHECK(header_value(r1.out, "s") == "0.5");
    CHECK(std::stod(header_value(r1.out, "mass")) == 1.0);
}

TEST_CASE("sigma and signed surface their scalar results in the header") {
    const CliResult sg = run({"sigma", "--s", "0.5", "--q", "5", "--b", "1", "--a",
                              "0.5", "--grid-n", "3"});
    CHECK(sg.code == 0);
    CHECK(std::fabs(std::stod(header_value(sg.out, "mass")) - 0.1579953845) < 1e-7);

    const CliResult sn = run({"signed", "--s", "0.5", "--q", "5", "--b", "1", "--a",
                              "2", "--grid-n", "3"});
    CHECK(sn.code == 0);
    CHECK(std::stod(header_value(sn.out, "endpoint_coefficient")) < 0.0);
    const double ap = std::stod(header_value(sn.out, "positive_halfwidth"));
    CHECK(ap > 1.44);
    CHECK(ap < 2.0);
    CHECK(std::fabs(std::stod(header_value(sn.out, "balayage_mass")) - 0.6272843868) <
          1e-6);
}

TEST_CASE("functional csv samples a geometric grid") {
    const CliResult r = run({"functional", "--s", "0.5", "--q", "0.75", "--b", "1",
                             "--a-min", "0.1", "--a-max", "100", "--n", "4"});
    CHECK(r.code == 0);
    const std::vector<std::string> rows = data_rows(r.out);
    REQUIRE(rows.size() == 4);
    double prev = std::numeric_limits<double>::infinity();
    for (const std::string& row : rows) {
        const auto [a, f] = split_row(row);
        CHECK(f > 0.0);
        CHECK(f < prev);
        prev = f;
    }
    CHECK(split_row(rows[0]).first == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(split_row(rows[1]).first == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(split_row(rows[3]).first == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("iba command reports traces and regimes") {
    const CliResult r = run({"iba", "--s", "0.5", "--q", "5", "--b", "1", "--a0", "4"});
    CHECK(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("stop_reason") == "converged");
    const auto a_seq = j.at("a_sequence").get<std::vector<double>>();
    REQUIRE(!a_seq.empty());
    CHECK(a_seq.front() == 4.0);
    CHECK(std::fabs(j.at("limit_halfwidth").get<double>() - 1.44227117262485513) <
          1e-6);

    const CliResult flat = run({"iba", "--s", "0.5", "--q", "0.5", "--b", "1"});
    CHECK(flat.code == 0);
    const nlohmann::json jf = nlohmann::json::parse(flat.out);
    CHECK(jf.at("stop_reason") == "non_shrinking");
    CHECK(jf.at("limit_halfwidth") == "inf");
    const IBATrace tr = jf.get<IBATrace>();
    CHECK(std::isinf(tr.limit_halfwidth));

    const CliResult csv = run({"iba", "--s", "0.5", "--q", "5", "--b", "1", "--a0",
                               "4", "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(header_value(csv.out, "stop_reason") == "converged");
    CHECK(data_rows(csv.out).size() == a_seq.size());
}

TEST_CASE("verify command checks the equilibrium conditions end to end") {
    const CliResult r = run({"verify", "--s", "0.5", "--q", "5", "--b", "1"});
    CHECK(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("passed") == true);
    CHECK(j.at("constancy_gap").get<double>() <=
          1e-6 * std::fabs(j.at("f_q_used").get<double>()));
    CHECK(j.at("off_support_min_excess").get<double>() > 0.0);
    CHECK(std::fabs(j.at("edge_exponent_right").get<double>() - 0.75) < 0.05);
    const FrostmanReport fr = j.get<FrostmanReport>();
    CHECK(fr.constancy_gap == j.at("constancy_gap").get<double>());
}

TEST_CASE("logcase half-widths land on the closed form") {
    const CliResult q5 = run({"logcase", "--q", "5", "--b", "1", "--grid-n", "3"});
    CHECK(q5.code == 0);
    CHECK(std::stod(header_value(q5.out, "a_tilde")) == 0.75);
    CHECK(std::stod(header_value(q5.out, "mass")) == 1.0);

    const CliResult q2 = run({"logcase", "--q", "2", "--b", "1", "--grid-n", "3"});
    CHECK(q2.code == 0);
    CHECK(std::stod(header_value(q2.out, "a_tilde")) == std::sqrt(3.0));
}

TEST_CASE("output lands in the requested file") {
    const std::string path = "unit_cli_artifact.csv";
    std::remove(path.c_str());
    const CliResult r = run({"density", "--s", "0.5", "--q", "2", "--b", "1",
                             "--grid-n", "3", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str().rfind("# riesz-equilibrium", 0) == 0);
    CHECK(data_rows(content.str()).size() == 3);
    std::remove(path.c_str());
}

TEST_CASE("exit codes separate usage, domain, and verification failures") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"--version"}).out == std::string(cli_version) + "\n");
    CHECK(run({}).code == 64);
    CHECK(run({"endpoint", "--s", "0.5", "--q", "5"}).code == 64);
    CHECK(run({"endpoint", "--s", "0.5", "--q", "5", "--b", "1", "--bogus"}).code ==
          64);
    CHECK(run({"density", "--s", "0.5", "--q", "2", "--b", "1", "--format", "xml"})
              .code == 64);
    CHECK(run({"verify", "--s", "0.5", "--q", "5", "--b", "1", "--tol", "0"}).code ==
          64);

    const CliResult nex = run({"endpoint", "--s", "0.5", "--q", "0.9", "--b", "1"});
    CHECK(nex.code == 2);
    CHECK(nex.err.find("no equilibrium measure exists") != std::string::npos);
    CHECK(run({"endpoint", "--s", "1.5", "--q", "5", "--b", "1"}).code == 2);
    CHECK(run({"density", "--s", "0.5", "--q", "2", "--b", "0"}).code == 2);
    CHECK(run({"density", "--s", "0.5", "--q", "2", "--b", "1", "--grid-n", "1"})
              .code == 2);
    CHECK(run({"verify", "--s", "0.5", "--q", "1", "--b", "1"}).code == 2);
    CHECK(run({"logcase", "--q", "0.5", "--b", "1"}).code == 2);
    CHECK(run({"sigma", "--s", "0.5", "--q", "5", "--b", "1", "--a", "-1"}).code ==
          2);
    CHECK(run({"iba", "--s", "0.5", "--q", "5", "--b", "1", "--a0", "-3"}).code == 2);
}
