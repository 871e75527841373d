#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "sobolev/corpus.hpp"
#include "sobolev/study.hpp"

namespace {

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const sobolev::validation_error*>(&e)) return 2;
    if (dynamic_cast<const sobolev::lookup_error*>(&e)) return 2;
    return 3;  // numeric / domain / resolution failures during a run
}

void print_corpus() {
    for (const std::string& id : sobolev::corpus_ids()) {
        const auto& entry = sobolev::corpus_get(id);
        std::printf("%-24s dims=", id.c_str());
        for (std::size_t i = 0; i < entry.dims.size(); ++i)
            std::printf("%s%d", i ? "," : "", entry.dims[i]);
        std::printf("  smoothness=%s\n", entry.smoothness.c_str());
        for (const auto& m : entry.memberships)
            std::printf("    %s%s p=%g\n", m.belongs ? "in " : "not in ",
                        std::string(to_string(m.space)).c_str(), m.p);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sobolev-lab: batch studies of fine properties of sampled functions"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    int jobs = 1;

    auto* run = app.add_subcommand("run", "run a study from a config file");
    run->add_option("config", config_path, "path to the study config")->required();
    run->add_option("--jobs", jobs, "worker cap for per-point parallelism");
    run->add_option("--out", out_dir, "output directory");

    auto* validate = app.add_subcommand("validate", "parse and validate a config file");
    validate->add_option("config", config_path, "path to the study config")->required();

    app.add_subcommand("list-corpus", "list registered corpus functions");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list-corpus")) {
            print_corpus();
            return 0;
        }
        sobolev::StudyConfig cfg = sobolev::parse_config(config_path);
        cfg.jobs = jobs;
        cfg.out_dir = out_dir;
        sobolev::validate_config(cfg);
        if (app.got_subcommand("validate")) {
            std::printf("ok: %s\n", config_path.c_str());
            return 0;
        }
        const sobolev::StudyOutcome outcome = sobolev::run_study(cfg);
        std::printf("wrote %s\n", outcome.csv_path.c_str());
        std::printf("wrote %s\n", outcome.summary_path.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    }
}
