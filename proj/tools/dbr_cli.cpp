#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dbr/dbr.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kInputError = 2;

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("dbr");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("DBR_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to off
        if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
        else spdlog::warn("unknown DBR_LOG level '{}', keeping 'warn'", env);
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw dbr::Error(dbr::ErrorKind::InvalidSpec, "cannot write " + path);
    out << text;
}

int finish_report(const dbr::Report& report, const std::string& out) {
    for (const std::string& w : report.warnings) spdlog::warn("{}", w);
    for (const dbr::Check& c : report.checks) {
        if (c.skipped) spdlog::info("check {} skipped", c.name);
        else if (!c.pass) spdlog::error("check {} failed: residual {:.3e}, tolerance {:.3e}", c.name, c.residual, c.tolerance);
        else spdlog::debug("check {} passed: residual {:.3e}", c.name, c.residual);
    }
    write_text(out, dbr::to_json(report).dump(2) + "\n");
    if (!report.pass()) {
        for (const dbr::Check& c : report.checks)
            if (!c.pass && !c.skipped) std::cerr << "check failed: " << c.name << "\n";
        return kCheckFailure;
    }
    return kPass;
}

std::string sample_csv(const dbr::KernelModel& km, int grid) {
    std::vector<dbr::cplx> nodes;
    for (int i = 0; i < grid; ++i) {
        const double r = 0.95 * i / std::max(grid - 1, 1);
        const double theta = 2.0 * std::numbers::pi * i / grid;
        nodes.push_back(r == 0.0 ? dbr::cplx(0.0) : std::polar(r, theta));
    }
    std::string s = "re(z),im(z),re(w),im(w),re(K),im(K)\n";
    char buf[256];
    for (const dbr::cplx& z : nodes)
        for (const dbr::cplx& w : nodes) {
            const dbr::cplx k = dbr::kernel_at(km, w, z);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", z.real(), z.imag(), w.real(), w.imag(),
                          k.real(), k.imag());
            s += buf;
        }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"de Branges-Rovnyak spaces from local Dirichlet norms"};
    app.require_subcommand(1);

    std::string spec_path, out_path;
    dbr::Options opt;
    int grid = 16;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("spec", spec_path, "space specification (JSON)")->required();
        sub->add_option("-o,--out", out_path, "output file (default: stdout)");
    };
    auto add_tuning = [&](CLI::App* sub) {
        sub->add_option("--tol", opt.tol, "residual tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--samples", opt.samples, "quadrature samples")->check(CLI::Range(16, 1 << 20));
        sub->add_option("--degree-cap", opt.degree_cap, "probe degree for the isometry sweep")->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", opt.seed, "seed for randomized probes");
    };

    CLI::App* construct = app.add_subcommand("construct", "build the space and write the report");
    add_common(construct);
    add_tuning(construct);
    CLI::App* verify = app.add_subcommand("verify", "build the space and run the full property suite");
    add_common(verify);
    add_tuning(verify);
    CLI::App* sample = app.add_subcommand("sample", "write kernel values on a polar grid as CSV");
    add_common(sample);
    sample->add_option("--grid", grid, "grid nodes per axis")->check(CLI::PositiveNumber);
    CLI::App* mate = app.add_subcommand("mate", "compute the mate only");
    add_common(mate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kInputError;
    }

    dbr::SpaceSpec spec;
    try {
        spec = dbr::load_spec(spec_path);
    } catch (const dbr::Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    }
    spdlog::info("loaded {} point(s) from {}", spec.size(), spec_path);

    try {
        if (*construct || *verify) {
            const dbr::Report report = *verify ? dbr::run_verify(spec, opt) : dbr::run_construct(spec, opt);
            spdlog::info("strict order: {}", report.strict_label);
            return finish_report(report, out_path);
        }
        std::vector<std::string> warnings;
        const dbr::SpaceSpec reduced = spec.reduced(&warnings);
        for (const std::string& w : warnings) spdlog::warn("{}", w);
        if (*mate) {
            const dbr::MateResult m = dbr::mate_from_spec(reduced);
            for (const std::string& w : m.warnings) spdlog::warn("{}", w);
            write_text(out_path, dbr::to_json(m).dump(2) + "\n");
            return kPass;
        }
        const dbr::KernelModel km = dbr::build_kernel_model(reduced);
        for (const std::string& w : km.warnings) spdlog::warn("{}", w);
        write_text(out_path, sample_csv(km, grid));
        return kPass;
    } catch (const dbr::Error& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return kCheckFailure;
    }
}
