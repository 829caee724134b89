// Command-line front end: coined walk on the line with one phase defect.
//
//   qwalk simulate    evolve a single release and dump the final state
//   qwalk boundstates closed-form localized eigenstate profiles
//   qwalk scan        predicted defect-site probability across a sweep

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qwalk/cli.hpp"
#include "qwalk/io.hpp"

namespace {

// Angle flags go through parse_angle so "pi/6" style values work.
void add_angle_option(CLI::App* cmd, const std::string& name, double& target,
                      const std::string& help) {
    cmd->add_option_function<std::string>(
           name,
           [&target, name](const std::string& raw) {
               try {
                   target = qwalk::parse_angle(raw);
               } catch (const std::invalid_argument& e) {
                   throw CLI::ValidationError(name, e.what());
               }
           },
           help)
        ->type_name("ANGLE");
}

void add_format_option(CLI::App* cmd, qwalk::OutputFormat& target) {
    cmd->add_option_function<std::string>(
           "--format",
           [&target](const std::string& raw) {
               const auto fmt = qwalk::parse_format(raw);
               if (!fmt) throw CLI::ValidationError("--format", "must be csv or json");
               target = *fmt;
           },
           "output format: csv or json (default csv)")
        ->type_name("FMT");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete-time coined walk with a single phase defect"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qwalk::tool_version));

    qwalk::SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand("simulate", "evolve one release");
    add_angle_option(simulate, "--theta", sim.theta, "coin angle");
    add_angle_option(simulate, "--varphi", sim.varphi, "initial coin mixing angle");
    add_angle_option(simulate, "--delta", sim.delta, "initial coin relative phase");
    simulate->add_option("--phi", sim.phi, "defect strength in [0, 1)");
    simulate->add_option("--defect-pos", sim.defect_pos, "defect site");
    int sim_steps = -1;
    simulate->add_option("--steps", sim_steps, "steps to run (default 480/481)");
    simulate->add_option("--out", sim.out, "output path ('-' for stdout)");
    add_format_option(simulate, sim.format);

    qwalk::BoundstatesOptions bnd;
    CLI::App* boundstates =
        app.add_subcommand("boundstates", "localized eigenstate profiles");
    add_angle_option(boundstates, "--theta", bnd.theta, "coin angle");
    boundstates->add_option("--phi", bnd.phi, "defect strength in [0, 1)");
    boundstates->add_option("--defect-pos", bnd.defect_pos, "defect site");
    int bnd_window = -1;
    boundstates->add_option("--window", bnd_window,
                            "profile half-width in sites (even, default auto)");
    boundstates->add_option("--out", bnd.out, "output path ('-' for stdout)");
    add_format_option(boundstates, bnd.format);

    qwalk::ScanOptions scn;
    CLI::App* scan = app.add_subcommand("scan", "sweep a parameter");
    std::string scan_kind = "theta";
    scan->add_option("--scan", scan_kind, "swept parameter: theta or defect-pos")
        ->required();
    std::string scan_values;
    scan->add_option("--values", scan_values, "comma-separated scan values")
        ->required();
    add_angle_option(scan, "--theta", scn.theta, "fixed coin angle");
    add_angle_option(scan, "--varphi", scn.varphi, "initial coin mixing angle");
    add_angle_option(scan, "--delta", scn.delta, "initial coin relative phase");
    scan->add_option("--phi", scn.phi, "defect strength in [0, 1)");
    scan->add_option("--defect-pos", scn.defect_pos, "fixed defect site");
    int scan_check = -1;
    scan->add_option("--simulate-check", scan_check,
                     "verify against a simulation of this many steps");
    scan->add_option("--out", scn.out, "output path ('-' for stdout)");
    add_format_option(scan, scn.format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // help/version exit cleanly; anything else is a usage error
        return code == 0 ? 0 : 2;
    }

    if (simulate->parsed()) {
        if (sim_steps >= 0) sim.steps = sim_steps;
        return qwalk::run_simulate(sim);
    }
    if (boundstates->parsed()) {
        if (bnd_window >= 0) bnd.window = bnd_window;
        return qwalk::run_boundstates(bnd);
    }
    if (scan->parsed()) {
        if (scan_kind == "theta") {
            scn.kind = qwalk::ScanKind::theta;
        } else if (scan_kind == "defect-pos") {
            scn.kind = qwalk::ScanKind::defect_pos;
        } else {
            std::cerr << "usage error: --scan must be theta or defect-pos\n";
            return 2;
        }
        std::string token;
        for (char ch : scan_values) {
            if (ch == ',') {
                if (!token.empty()) scn.values.push_back(token);
                token.clear();
            } else {
                token.push_back(ch);
            }
        }
        if (!token.empty()) scn.values.push_back(token);
        if (scan_check >= 0) scn.simulate_check = scan_check;
        return qwalk::run_scan(scn);
    }
    return 2;
}
