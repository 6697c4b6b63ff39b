#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgeom/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qgeom: quantum-geometric adiabatic response on exactly solvable models"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    int jobs = 1;
    std::vector<std::string> tolerance_kv;

    CLI::App* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (default: $QGEOM_OUT or ./out)");
    run->add_option("--jobs", jobs, "run independent tasks concurrently")->check(CLI::PositiveNumber);
    run->add_option("--tolerance", tolerance_kv, "override, e.g. degeneracy_rel=1e-8");

    CLI::App* list = app.add_subcommand("list-tasks", "print the task catalog");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto& doc : qgeom::runner::list_tasks()) {
            std::printf("%-28s %s\n", doc.name.c_str(), doc.description.c_str());
            for (const auto& [key, text] : doc.params)
                std::printf("    %-24s %s\n", key.c_str(), text.c_str());
        }
        return 0;
    }

    qgeom::runner::RunOptions opts;
    opts.out_dir = out_dir;
    opts.jobs = jobs;
    for (const auto& kv : tolerance_kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "bad --tolerance '%s' (expected key=value)\n", kv.c_str());
            return 2;
        }
        try {
            opts.tolerance_overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            std::fprintf(stderr, "bad --tolerance value in '%s'\n", kv.c_str());
            return 2;
        }
    }

    try {
        qgeom::runner::RunManifest manifest = qgeom::runner::run(scenario_path, opts);
        for (const auto& t : manifest.tasks)
            std::printf("%-28s %s%s%s\n", t.name.c_str(), t.status.c_str(),
                        t.error_code.empty() ? "" : " ", t.error_code.c_str());
        return manifest.all_ok() ? 0 : 1;
    } catch (const qgeom::ConfigParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const qgeom::UnknownTask& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const qgeom::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
}
