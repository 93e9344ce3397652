#include "cli.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

using doctest::Approx;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::initializer_list<const char*> args)
{
    std::vector<const char*> argv{"qdot"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = qdot::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string line; std::getline(is, line);)
        out.push_back(line);
    return out;
}

std::vector<std::string> data_lines(const std::string& s)
{
    std::vector<std::string> out;
    for (auto& l : lines_of(s))
        if (!l.empty() && l[0] != '#')
            out.push_back(l);
    return out;
}

std::vector<double> csv_row(const std::string& line)
{
    std::vector<double> out;
    std::istringstream is(line);
    for (std::string cell; std::getline(is, cell, ',');)
        out.push_back(cell.empty() ? std::nan("") : std::atof(cell.c_str()));
    return out;
}

} // namespace

TEST_CASE("solve")
{
    SUBCASE("both methods, JSON")
    {
        const auto r = run_cli({"solve", "--r0", "1", "--nr", "0", "--m", "0", "--coulomb", "1",
                             "--method", "both", "--format", "json"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["rows"][0]["E_wkb"].get<double>() == Approx(9.6186).epsilon(5e-4));
        CHECK(j["rows"][0]["E_exact"].get<double>() == Approx(9.0240).epsilon(5e-3));
        CHECK(j["config"]["subcommand"] == "solve");
        CHECK(j["config"]["coulomb"] == 1.0);
        CHECK(j["config"]["method"] == "both");
        CHECK(j["config"]["r0"] == 1.0);
        CHECK(j["rows"][0]["exact"]["n_intervals_used"].get<int>() > 0);
    }
    SUBCASE("free disc WKB")
    {
        const auto r = run_cli({"solve", "--r0", "2", "--nr", "0", "--m", "0", "--coulomb", "0",
                             "--method", "wkb", "--format", "csv"});
        REQUIRE(r.code == 0);
        const auto row = csv_row(data_lines(r.out).at(1));
        CHECK(row[5] == Approx(std::pow(0.75 * M_PI / 2, 2)).epsilon(1e-5));
    }
    SUBCASE("default method and Coulomb strength")
    {
        const auto r = run_cli({"solve", "--r0", "1", "--m", "1", "--coulomb", "2"});
        REQUIRE(r.code == 0);
        CHECK(r.out.find("| exact | 18.7") != std::string::npos);
        CHECK(r.out.find("| wkb |") != std::string::npos);
        CHECK(r.out.find("rel_diff") != std::string::npos);
        const auto j = nlohmann::json::parse(
            run_cli({"solve", "--r0", "1", "--m", "1", "--coulomb", "2", "--format", "json"}).out);
        CHECK(j["rows"][0]["E_exact"].get<double>() == Approx(18.646).epsilon(5e-3));
        const auto d = nlohmann::json::parse(run_cli({"solve", "--r0", "1", "--format", "json"}).out);
        CHECK(d["config"]["coulomb"] == 1.0);
    }
    SUBCASE("usage errors")
    {
        CHECK(run_cli({"solve"}).code == 2);
        CHECK(run_cli({"solve", "--r0", "-1"}).code == 2);
        CHECK(run_cli({"solve", "--r0", "1", "--method", "magic"}).code == 2);
        CHECK(run_cli({"solve", "--r0", "1", "--nr", "-1"}).code == 2);
        CHECK(run_cli({}).code == 2);
        CHECK(run_cli({"frobnicate"}).code == 2);
        CHECK(run_cli({"--help"}).code == 0);
    }
    SUBCASE("numerical failure")
    {
        const auto r = run_cli({"solve", "--r0", "1", "--method", "exact", "--max-doublings", "1",
                             "--intervals", "64"});
        CHECK(r.code == 3);
        CHECK(r.err.find("mesh not converged") != std::string::npos);
    }
}

TEST_CASE("sweep")
{
    SUBCASE("Table 1 radii")
    {
        const auto r = run_cli({"sweep", "--r0-list", "0.4,0.6,0.7,0.8,0.9,1,1.5,2,3,4,5,6,9,10,12",
                             "--coulomb", "1", "--method", "wkb"});
        REQUIRE(r.code == 0);
        const std::vector<double> published{47.031, 22.989, 17.608, 14.013, 11.479,
                                            9.6186, 4.9446, 3.1283, 1.6742, 1.0895,
                                            0.78678, 0.60592, 0.34399, 0.29788, 0.23288};
        const auto lines = data_lines(r.out);
        REQUIRE(lines.size() == published.size() + 1);
        for (std::size_t i = 0; i < published.size(); ++i)
            CHECK(csv_row(lines[i + 1])[5] == Approx(published[i]).epsilon(5e-4));
    }
    SUBCASE("single point matches solve")
    {
        const auto s = run_cli({"sweep", "--r0-list", "3", "--m", "1", "--coulomb", "2"});
        const auto p = run_cli({"solve", "--r0", "3", "--m", "1", "--coulomb", "2", "--format", "csv"});
        REQUIRE(s.code == 0);
        CHECK(s.out == p.out);
    }
    SUBCASE("log range")
    {
        const auto r = run_cli({"sweep", "--r0-log", "1:100:3", "--method", "wkb"});
        REQUIRE(r.code == 0);
        const auto lines = data_lines(r.out);
        REQUIRE(lines.size() == 4);
        CHECK(csv_row(lines[1])[1] == 1.0);
        CHECK(csv_row(lines[2])[1] == 10.0);
        CHECK(csv_row(lines[3])[1] == 100.0);
    }
    SUBCASE("bad arguments")
    {
        CHECK(run_cli({"sweep"}).code == 2);
        CHECK(run_cli({"sweep", "--r0-list", "1,x"}).code == 2);
        CHECK(run_cli({"sweep", "--r0-log", "1:100"}).code == 2);
        CHECK(run_cli({"sweep", "--r0-list", "1", "--r0-log", "1:2:2"}).code == 2);
    }
}

TEST_CASE("reproduce")
{
    SUBCASE("Table 3 passes")
    {
        const auto r = run_cli({"reproduce", "--table", "3"});
        CHECK(r.code == 0);
        CHECK(r.out.find("## Table 3") != std::string::npos);
        CHECK(r.out.find("## Unit audit") != std::string::npos);
        CHECK(r.out.find("| 3 | 13 | 0 | 13 | 0 | 0 |") != std::string::npos);
    }
    SUBCASE("Coulomb override fails Table 1")
    {
        const auto r = run_cli({"reproduce", "--table", "1", "--coulomb-override", "2",
                             "--format", "json"});
        CHECK(r.code == 1);
        const auto j = nlohmann::json::parse(r.out);
        for (const auto& row : j["rows"])
            CHECK(row["err_wkb"].get<double>() > 0.10);
        CHECK(j["config"]["coulomb_override"] == 2.0);
    }
    SUBCASE("all tables as CSV")
    {
        const auto r = run_cli({"reproduce", "--table", "all", "--format", "csv"});
        CHECK(r.code == 0);
        CHECK(data_lines(r.out).size() == 40);
    }
    SUBCASE("tight tolerance turns the odd Table 2 row into a failure")
    {
        const auto r = run_cli({"reproduce", "--table", "2", "--method", "wkb", "--tolerance",
                             "5e-4", "--format", "csv"});
        CHECK(r.code == 0);
        const auto loose = run_cli({"reproduce", "--table", "2", "--method", "wkb",
                                 "--tolerance", "1e-6", "--format", "csv"});
        CHECK(loose.code == 0);
        CHECK(loose.out.find(",suspect\n") != std::string::npos);
    }
}

TEST_CASE("action")
{
    SUBCASE("Table 1 energy")
    {
        const auto r = run_cli({"action", "--E", "9.6186", "--r0", "1", "--m", "0", "--coulomb",
                             "1", "--format", "json"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        REQUIRE(j["actions"].size() == 3);
        for (const auto& a : j["actions"])
            CHECK(a["alpha_over_pi"].get<double>() == Approx(0.75).epsilon(2e-3));
        CHECK(j["nearest_n_r"] == 0);
        CHECK(j["config"]["E"] == 9.6186);
    }
    SUBCASE("Table 3 energy")
    {
        const auto r = run_cli({"action", "--E", "54.222", "--r0", "1", "--m", "1", "--coulomb", "2"});
        REQUIRE(r.code == 0);
        CHECK(r.out.find("alpha/pi = 1.75") != std::string::npos);
        CHECK(r.out.find("(n_r = 1)") != std::string::npos);
        CHECK(r.out.find("closed_form") != std::string::npos);
        CHECK(r.out.find("rho_t = ") != std::string::npos);
    }
    SUBCASE("free disc")
    {
        const double e = std::pow(0.75 * M_PI / 2.0, 2);
        const auto es = std::to_string(e);
        std::ostringstream arg;
        arg.precision(17);
        arg << e;
        const auto s = arg.str();
        const auto r = run_cli({"action", "--E", s.c_str(), "--r0", "2", "--coulomb", "0",
                             "--format", "json"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["actions"][0]["alpha_over_pi"].get<double>() == Approx(0.75).epsilon(1e-14));
    }
    SUBCASE("below the wall potential")
    {
        CHECK(run_cli({"action", "--E", "0.5", "--r0", "1", "--coulomb", "1"}).code == 3);
        CHECK(run_cli({"action", "--r0", "1"}).code == 2);
    }
}

TEST_CASE("wavefunction")
{
    SUBCASE("exact free disc matches J0")
    {
        const auto r = run_cli({"wavefunction", "--r0", "1", "--coulomb", "0", "--samples", "100"});
        REQUIRE(r.code == 0);
        const auto lines = data_lines(r.out);
        REQUIRE(lines.front() == "r,u,psi");
        REQUIRE(lines.size() == 101);
        const double j01 = boost::math::cyl_bessel_j_zero(0.0, 1);
        // normalization of J0(j01 r) with int psi^2 r dr = 1
        const double norm = std::abs(boost::math::cyl_bessel_j(1, j01)) / std::sqrt(2.0);
        double worst = 0.0;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto row = csv_row(lines[i]);
            const double expected = boost::math::cyl_bessel_j(0, j01 * row[0]) / norm;
            worst = std::max(worst, std::abs(row[2] - expected));
            CHECK(row[1] == Approx(std::sqrt(row[0]) * row[2]).epsilon(1e-8));
        }
        CHECK(worst <= 1e-5);
        const auto last = csv_row(lines.back());
        CHECK(last[0] == 1.0);
        CHECK(std::abs(last[1]) <= 1e-6);
    }
    SUBCASE("node count in u column")
    {
        const auto r = run_cli({"wavefunction", "--r0", "2", "--nr", "2", "--m", "1",
                             "--coulomb", "2", "--samples", "400"});
        REQUIRE(r.code == 0);
        const auto lines = data_lines(r.out);
        int nodes = 0;
        for (std::size_t i = 2; i + 1 < lines.size(); ++i)
            if (csv_row(lines[i])[1] * csv_row(lines[i - 1])[1] < 0.0)
                ++nodes;
        CHECK(nodes == 2);
    }
    SUBCASE("WKB branches")
    {
        const auto r = run_cli({"wavefunction", "--r0", "1", "--coulomb", "1", "--method", "wkb",
                             "--samples", "1000"});
        REQUIRE(r.code == 0);
        CHECK(r.out.find("omitted") != std::string::npos);
        CHECK(r.out.find("|rho - rho_t| < delta") != std::string::npos);
        const auto lines = data_lines(r.out);
        CHECK(lines.front() == "r,u,psi,region");
        CHECK(lines[1].substr(lines[1].rfind(',')) == ",I");
        CHECK(lines.back().substr(lines.back().rfind(',')) == ",II");
        CHECK(std::abs(csv_row(lines.back())[1]) <= 1e-6);
    }
    SUBCASE("bad method")
    {
        CHECK(run_cli({"wavefunction", "--r0", "1", "--method", "both"}).code == 2);
    }
}

TEST_CASE("output files")
{
    const auto path = (std::filesystem::temp_directory_path() / "qdot_cli_test.csv").string();
    const auto r = run_cli({"sweep", "--r0-list", "1,2", "--method", "wkb", "-o", path.c_str()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(data_lines(ss.str()).size() == 3);
    std::filesystem::remove(path);

    const auto bad = run_cli({"solve", "--r0", "1", "--method", "wkb", "-o", "/nonexistent-dir/x"});
    CHECK(bad.code == 3);
    CHECK(bad.err.find("/nonexistent-dir/x") != std::string::npos);
}

TEST_CASE("deterministic bytes")
{
    const auto a = run_cli({"reproduce", "--table", "2", "--format", "json"});
    const auto b = run_cli({"reproduce", "--table", "2", "--format", "json"});
    CHECK(a.out == b.out);
}
