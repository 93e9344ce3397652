#include "cli.hpp"

#include "qdot/numerov.hpp"
#include "qdot/report.hpp"
#include "qdot/wkb.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace qdot::cli {

namespace {

using nlohmann::json;
using report::Format;
using report::Methods;

constexpr double pi = boost::math::constants::pi<double>();

struct RunConfig {
    std::string subcommand;
    std::string method = "both";
    double r0 = 1.0;
    std::string r0_list;
    std::string r0_log;
    std::vector<double> radii;
    int n_r = 0;
    int m = 0;
    double coulomb = 1.0;
    std::optional<double> coulomb_override;
    std::string format = "md";
    std::string table = "all";
    double energy = 0.0;
    int samples = 200;
    report::Tolerances tolerances;
    numerov::ExactOptions exact;
    std::string output;
    unsigned threads = 0;
};

json echo(const RunConfig& c)
{
    json j = {
        {"subcommand", c.subcommand},
        {"method", c.method},
        {"n_r", c.n_r},
        {"m", c.m},
        {"coulomb", c.coulomb},
        {"format", c.format},
        {"tolerances",
         {{"wkb", c.tolerances.wkb},
          {"exact", c.tolerances.exact},
          {"transcription", c.tolerances.transcription},
          {"mesh_error", c.tolerances.mesh_error}}},
        {"mesh",
         {{"n_intervals", c.exact.n_intervals},
          {"max_mesh_doublings", c.exact.max_mesh_doublings}}},
        {"output", c.output},
        {"threads", c.threads},
    };
    if (c.subcommand == "solve" || c.subcommand == "action" ||
        c.subcommand == "wavefunction")
        j["r0"] = c.r0;
    if (c.subcommand == "sweep")
        j["r0_list"] = c.radii;
    if (c.subcommand == "reproduce") {
        j["table"] = c.table;
        j["coulomb_override"] =
            c.coulomb_override ? json(*c.coulomb_override) : json(nullptr);
    }
    if (c.subcommand == "action")
        j["E"] = c.energy;
    if (c.subcommand == "wavefunction")
        j["samples"] = c.samples;
    return j;
}

Methods parse_methods(const std::string& s)
{
    if (s == "wkb") return Methods::wkb;
    if (s == "exact") return Methods::exact;
    return Methods::both;
}

std::string fmt(double v, int digits = 10)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("invalid --r0-list entry '" + item + "'");
        }
        if (used != item.size() || !(v > 0.0))
            throw UsageError("invalid --r0-list entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw UsageError("--r0-list is empty");
    return out;
}

std::vector<double> parse_log_range(const std::string& s)
{
    double start = 0.0, stop = 0.0;
    int count = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &start, &stop, &count, &tail) != 3 ||
        !(start > 0.0) || !(stop > 0.0) || count < 1)
        throw UsageError("--r0-log expects start:stop:count with positive values");
    std::vector<double> out;
    for (int k = 0; k < count; ++k) {
        if (count == 1)
            out.push_back(start);
        else if (k == count - 1)
            out.push_back(stop);
        else
            out.push_back(start * std::pow(stop / start, static_cast<double>(k) / (count - 1)));
    }
    return out;
}

void deliver(const std::string& text, const RunConfig& c, std::ostream& out)
{
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(c.output, std::ios::binary);
    if (!file)
        throw report::EmitError(c.output, "cannot open output file");
    file << text;
    file.flush();
    if (!file)
        throw report::EmitError(c.output, "write failed");
}

report::RunOptions run_options(const RunConfig& c)
{
    report::RunOptions opts;
    opts.methods = parse_methods(c.method);
    opts.exact = c.exact;
    opts.threads = c.threads;
    opts.coulomb_override = c.coulomb_override;
    return opts;
}

std::string render(const report::ReproductionReport& rep, const RunConfig& c)
{
    std::ostringstream os;
    report::emit(rep, *report::parse_format(c.format), os, echo(c));
    return os.str();
}

void describe(std::ostream& os, const char* name, const EigenResult& r)
{
    os << "| " << name << " | " << fmt(r.energy) << " | " << r.node_count << " | "
       << fmt(r.bracket_lo) << " | " << fmt(r.bracket_hi) << " | "
       << fmt(r.endpoint_residual, 3) << " | " << fmt(r.mesh_error_estimate, 3)
       << " | " << r.n_intervals_used << " |\n";
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    report::TableRow row{0, c.r0, c.n_r, c.m, c.coulomb, NAN, NAN};
    const auto opts = run_options(c);
    report::ReproductionReport rep;
    rep.rows.push_back(report::compute_row(row, c.coulomb, rep.tolerances, opts));
    const auto& r = rep.rows.front();

    if (c.format == "md") {
        std::ostringstream os;
        os << "## Level n_r = " << c.n_r << ", m = " << c.m << " at r0 = " << fmt(c.r0)
           << ", Z = " << fmt(c.coulomb) << "\n\n"
           << "| method | E | nodes | bracket lo | bracket hi | residual "
              "| mesh error | intervals |\n"
           << "|:---|---:|---:|---:|---:|---:|---:|---:|\n";
        if (r.wkb)
            describe(os, "wkb", *r.wkb);
        if (r.exact)
            describe(os, "exact", *r.exact);
        if (r.wkb && r.exact)
            os << "\nrel_diff = " << fmt(r.rel_diff, 6) << '\n';
        deliver(os.str(), c, out);
    } else {
        deliver(render(rep, c), c, out);
    }
    if (!r.message.empty()) {
        err << "qdot solve: " << r.message << '\n';
        return exit_numerical;
    }
    return exit_ok;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const auto rep = report::sweep(c.radii, c.n_r, c.m, c.coulomb, run_options(c));
    deliver(render(rep, c), c, out);
    int failures = 0;
    for (const auto& r : rep.rows) {
        if (r.status == report::Status::error) {
            ++failures;
            err << "qdot sweep: r0 = " << fmt(r.row.r0) << ": " << r.message << '\n';
        }
    }
    return failures == static_cast<int>(rep.rows.size()) ? exit_numerical : exit_ok;
}

int cmd_reproduce(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const int id = c.table == "all" ? 0 : std::stoi(c.table);
    auto rep = report::reproduce_table(id, c.tolerances, run_options(c));
    rep.audit = report::audit_units(c.threads);
    deliver(render(rep, c), c, out);
    if (rep.has_hard_failure()) {
        for (const auto& r : rep.rows)
            if (r.status == report::Status::fail || r.status == report::Status::error)
                err << "qdot reproduce: table " << r.row.table_id << " r0 = "
                    << fmt(r.row.r0) << ": " << report::to_string(r.status)
                    << (r.message.empty() ? "" : " (" + r.message + ")") << '\n';
        return exit_reproduction_failure;
    }
    return exit_ok;
}

int cmd_action(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const RadialProblem problem(c.r0, c.coulomb, c.m);
    const double v_wall = wall_potential(problem);
    if (!(c.energy > v_wall)) {
        err << "qdot action: E = " << fmt(c.energy)
            << " is not above the wall potential V(r0) = " << fmt(v_wall) << '\n';
        return exit_numerical;
    }
    std::vector<wkb::ActionResult> results;
    for (auto method : {wkb::ActionMethod::quadrature_rho, wkb::ActionMethod::quadrature_w,
                        wkb::ActionMethod::closed_form})
        results.push_back(wkb::action(c.energy, problem, method));

    const double ratio = results.front().alpha / pi;
    const int nearest = std::max(0, static_cast<int>(std::lround(ratio - 0.75)));

    std::ostringstream os;
    if (c.format == "json") {
        json j;
        j["config"] = echo(c);
        j["turning_point"] = results.front().turning_point;
        j["actions"] = json::array();
        for (const auto& a : results)
            j["actions"].push_back({{"method", wkb::to_string(a.method)},
                                    {"alpha", a.alpha},
                                    {"alpha_over_pi", a.alpha / pi},
                                    {"est_error", a.est_error}});
        j["nearest_n_r"] = nearest;
        j["nearest_phase_over_pi"] = nearest + 0.75;
        os << j.dump(2) << '\n';
    } else {
        os << "rho_t = " << fmt(results.front().turning_point) << "\n\n"
           << "| method | alpha | alpha/pi | est error |\n"
           << "|:---|---:|---:|---:|\n";
        for (const auto& a : results)
            os << "| " << wkb::to_string(a.method) << " | " << fmt(a.alpha, 12) << " | "
               << fmt(a.alpha / pi, 12) << " | " << fmt(a.est_error, 3) << " |\n";
        os << "\nalpha/pi = " << fmt(ratio, 6) << ", nearest n_r + 3/4 = "
           << fmt(nearest + 0.75, 6) << " (n_r = " << nearest << ")\n";
    }
    deliver(os.str(), c, out);
    return exit_ok;
}

int cmd_wavefunction(const RunConfig& c, std::ostream& out)
{
    const RadialProblem problem(c.r0, c.coulomb, c.m);
    const QuantumNumbers qn(c.n_r, c.m);
    std::ostringstream os;
    if (c.method == "wkb") {
        const auto level = wkb::solve_wkb(qn, problem);
        const wkb::WkbWavefunction wf(problem, level.energy);
        std::ostringstream rows;
        int omitted = 0;
        for (int k = 1; k <= c.samples; ++k) {
            const double rho = k == c.samples ? c.r0 : c.r0 * k / c.samples;
            if (wf.excluded(rho)) {
                ++omitted;
                continue;
            }
            const double u = wf(rho);
            rows << fmt(rho) << ',' << fmt(u) << ',' << fmt(u / std::sqrt(rho)) << ','
                 << (wf.region(rho) == wkb::WkbWavefunction::Region::forbidden ? "I" : "II")
                 << '\n';
        }
        os << "# method=wkb E=" << fmt(level.energy) << " n_r=" << c.n_r << " m=" << c.m
           << " Z=" << fmt(c.coulomb) << " r0=" << fmt(c.r0) << '\n'
           << "# rho_t=" << fmt(wf.turning_point()) << " delta=" << fmt(wf.delta())
           << "; omitted " << omitted
           << " points with |rho - rho_t| < delta (connection formulae diverge there)\n"
           << "r,u,psi,region\n"
           << rows.str();
    } else {
        const auto level = numerov::solve_exact(qn, problem, c.exact);
        const auto mesh = numerov::build_mesh(problem, level.energy, level.n_intervals_used);
        const auto wf = numerov::wavefunction_exact(level, mesh, problem);
        os << "# method=exact E=" << fmt(level.energy) << " n_r=" << c.n_r << " m=" << c.m
           << " Z=" << fmt(c.coulomb) << " r0=" << fmt(c.r0)
           << " nodes=" << wf.node_count() << " normalization=int psi^2 r dr=1\n"
           << "r,u,psi\n";
        for (int k = 1; k <= c.samples; ++k) {
            const double r = k == c.samples ? c.r0 : c.r0 * k / c.samples;
            const double psi = wf.psi_at(r);
            os << fmt(r) << ',' << fmt(std::sqrt(r) * psi) << ',' << fmt(psi) << '\n';
        }
    }
    deliver(os.str(), c, out);
    return exit_ok;
}

unsigned threads_from_env()
{
    const char* env = std::getenv("QDOT_THREADS");
    if (!env)
        return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    return (end != env && *end == '\0' && v > 0) ? static_cast<unsigned>(v) : 0;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig c;
    c.threads = threads_from_env();

    CLI::App app{"Bound states of a hard-wall circular quantum dot with a central charge"};
    app.require_subcommand(1);

    const std::vector<std::string> methods{"wkb", "exact", "both"};
    const std::vector<std::string> formats{"md", "csv", "json"};

    auto level_flags = [&](CLI::App* sub) {
        sub->add_option("--nr", c.n_r, "Radial node count n_r")->check(CLI::NonNegativeNumber);
        sub->add_option("--m", c.m, "Azimuthal quantum number");
        sub->add_option("--coulomb", c.coulomb, "Coulomb strength Z (default 1)")
            ->check(CLI::NonNegativeNumber);
    };
    auto mesh_flags = [&](CLI::App* sub) {
        sub->add_option("--intervals", c.exact.n_intervals, "Initial Numerov mesh intervals")
            ->check(CLI::Range(64, 1 << 24));
        sub->add_option("--max-doublings", c.exact.max_mesh_doublings,
                        "Mesh doublings before giving up")
            ->check(CLI::Range(1, 12));
    };
    auto output_flag = [&](CLI::App* sub) {
        sub->add_option("-o,--output", c.output, "Write output to a file");
    };

    auto* solve = app.add_subcommand("solve", "Energy of one level");
    solve->add_option("--r0", c.r0, "Wall radius")->required()->check(CLI::PositiveNumber);
    level_flags(solve);
    solve->add_option("--method", c.method)->check(CLI::IsMember(methods));
    solve->add_option("--format", c.format)->check(CLI::IsMember(formats));
    mesh_flags(solve);
    output_flag(solve);

    auto* sweep = app.add_subcommand("sweep", "One level over a list of wall radii (CSV)");
    auto* list_opt = sweep->add_option("--r0-list", c.r0_list, "Comma-separated radii");
    auto* log_opt = sweep->add_option("--r0-log", c.r0_log, "Geometric range start:stop:count");
    list_opt->excludes(log_opt);
    level_flags(sweep);
    sweep->add_option("--method", c.method)->check(CLI::IsMember(methods));
    sweep->add_option("--format", c.format)->check(CLI::IsMember(formats));
    mesh_flags(sweep);
    output_flag(sweep);

    auto* repro = app.add_subcommand("reproduce", "Compare against the published tables");
    repro->add_option("--table", c.table, "1, 2, 3 or all")
        ->check(CLI::IsMember({"1", "2", "3", "all"}));
    repro->add_option("--format", c.format)->check(CLI::IsMember(formats));
    repro->add_option("--tolerance", c.tolerances.wkb, "WKB relative tolerance")
        ->check(CLI::PositiveNumber);
    repro->add_option("--exact-tolerance", c.tolerances.exact, "Exact relative tolerance")
        ->check(CLI::PositiveNumber);
    repro->add_option("--coulomb-override", c.coulomb_override,
                      "Solve every row with this Z instead of the table's")
        ->check(CLI::NonNegativeNumber);
    repro->add_option("--method", c.method)->check(CLI::IsMember(methods));
    mesh_flags(repro);
    output_flag(repro);

    auto* action = app.add_subcommand("action", "WKB phase integral at a given energy");
    action->add_option("--E", c.energy, "Energy")->required();
    action->add_option("--r0", c.r0, "Wall radius")->required()->check(CLI::PositiveNumber);
    action->add_option("--m", c.m, "Azimuthal quantum number");
    action->add_option("--coulomb", c.coulomb, "Coulomb strength Z")
        ->check(CLI::NonNegativeNumber);
    action->add_option("--format", c.format)->check(CLI::IsMember({"md", "json"}));
    output_flag(action);

    auto* wave = app.add_subcommand("wavefunction", "Radial function samples (CSV)");
    wave->add_option("--r0", c.r0, "Wall radius")->required()->check(CLI::PositiveNumber);
    level_flags(wave);
    wave->add_option("--method", c.method, "exact or wkb")
        ->check(CLI::IsMember({"exact", "wkb"}));
    wave->add_option("--samples", c.samples, "Number of samples on (0, r0]")
        ->check(CLI::Range(2, 1000000));
    mesh_flags(wave);
    output_flag(wave);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    c.subcommand = app.get_subcommands().front()->get_name();
    if (c.subcommand == "sweep" && c.format == "md" && !sweep->count("--format"))
        c.format = "csv";
    if (c.subcommand == "wavefunction" && !wave->count("--method"))
        c.method = "exact";

    try {
        if (c.subcommand == "sweep" && c.r0_list.empty() && c.r0_log.empty())
            throw UsageError("one of --r0-list or --r0-log is required");
        if (c.subcommand == "sweep")
            c.radii = c.r0_list.empty() ? parse_log_range(c.r0_log) : parse_list(c.r0_list);
        if (c.subcommand == "solve") return cmd_solve(c, out, err);
        if (c.subcommand == "sweep") return cmd_sweep(c, out, err);
        if (c.subcommand == "reproduce") return cmd_reproduce(c, out, err);
        if (c.subcommand == "action") return cmd_action(c, out, err);
        return cmd_wavefunction(c, out);
    } catch (const UsageError& e) {
        err << "qdot " << c.subcommand << ": " << e.what() << '\n';
        return exit_usage;
    } catch (const report::EmitError& e) {
        err << "qdot " << c.subcommand << ": I/O error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "qdot " << c.subcommand << ": " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace qdot::cli
