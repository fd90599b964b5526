#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ftm/config.hpp"
#include "ftm/noiseless.hpp"
#include "ftm/runner.hpp"
#include "ftm/version.hpp"

namespace {

// Exit codes: 0 success, 1 configuration problem (parsing, validation,
// unsupported combination), 2 runtime failure (solver gate, I/O).
int fail(const std::exception& e, int code) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return code;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ftm::ValidationError("config", "cannot read file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-time measurement simulator for a monitored qubit in a thermal bath"};
    app.set_version_flag("--version", ftm::version);
    app.require_subcommand(1);

    std::string run_cfg, cmp_cfg, exp_cfg;
    double tm_lambda = 0.0, tm_f = 0.0;

    CLI::App* cmd_run =
        app.add_subcommand("run", "solve the configured scenario sweep and write trajectory CSVs");
    cmd_run->add_option("config", run_cfg, "configuration file")->required();

    CLI::App* cmd_cmp = app.add_subcommand(
        "compare", "run hybrid and splitting solvers and report their differences");
    cmd_cmp->add_option("config", cmp_cfg, "configuration file")->required();

    CLI::App* cmd_exp = app.add_subcommand(
        "experiment", "synthesize the weak-measurement data set and fit lambda^2");
    cmd_exp->add_option("config", exp_cfg, "configuration file")->required();

    CLI::App* cmd_tm =
        app.add_subcommand("tm", "report the measurement duration t_M(lambda, f)");
    cmd_tm->add_option("--lambda", tm_lambda, "apparatus coupling strength")
        ->required();
    cmd_tm->add_option("--f", tm_f, "target coherence attenuation, in (0,1)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (cmd_run->parsed()) {
            ftm::RunArtifacts art = ftm::run_scenarios(ftm::parse_config(slurp(run_cfg)));
            for (const std::string& p : art.csv_paths)
                std::printf("wrote %s\n", p.c_str());
        } else if (cmd_cmp->parsed()) {
            ftm::CompareReport rep = ftm::run_compare(ftm::parse_config(slurp(cmp_cfg)));
            std::fputs(rep.text.c_str(), stdout);
            std::printf("wrote %s\n", rep.report_path.c_str());
        } else if (cmd_exp->parsed()) {
            ftm::ExperimentArtifacts art =
                ftm::run_experiment(ftm::parse_config(slurp(exp_cfg)));
            std::printf("%s\n", art.text.c_str());
            std::printf("wrote %s\n", art.csv_path.c_str());
        } else if (cmd_tm->parsed()) {
            std::printf("t_M = %.17g\n", ftm::measurement_duration(tm_lambda, tm_f));
        }
    } catch (const ftm::RunError& e) {
        return fail(e, e.config_family() ? 1 : 2);
    } catch (const ftm::ParseError& e) {
        return fail(e, 1);
    } catch (const ftm::ValidationError& e) {
        return fail(e, 1);
    } catch (const ftm::UnsupportedScenario& e) {
        return fail(e, 1);
    } catch (const ftm::DomainError& e) {
        return fail(e, 1);
    } catch (const std::exception& e) {
        return fail(e, 2);
    }
    return 0;
}
