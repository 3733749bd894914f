// newman_lab: experiment runner for quadratic-phase magnitude reconstruction.
//
//   newman_lab <reconstruct|sweep|ensemble|optimize|extremal> --config cfg.json [--out dir]
//              [--seed u64] [--threads n] [--allow-large]
//
// Exit codes: 0 success, 1 numerical failure, 2 config or usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "newman/commands.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw newman::ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadratic-phase spectral reconstruction laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(newman::kToolVersion));

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool allow_large = false;

    const char* commands[][2] = {
        {"reconstruct", "Reconstruct one sampled spectrum at one size"},
        {"sweep", "Sup/RMS error of one descriptor over a list of sizes"},
        {"ensemble", "RMS error distribution of a random sum-of-sinusoids ensemble"},
        {"optimize", "Minimize the ensemble phase objective"},
        {"extremal", "L1 norm of the Newman polynomial and multitone crest factors"},
    };
    std::vector<CLI::App*> subs;
    std::vector<CLI::Option*> seed_opts;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "Output directory");
        seed_opts.push_back(sub->add_option("--seed", seed, "Override every seed in the config"));
        sub->add_option("--threads", threads, "Worker threads (default: NEWMAN_LAB_THREADS or all cores)");
        sub->add_flag("--allow-large", allow_large, "Permit transform sizes above 2^20");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? newman::kExitOk : newman::kExitUsage;
    }

    newman::RunOptions opts;
    opts.out_dir = out_dir;
    opts.threads = threads > 0 ? threads : newman::default_thread_count();
    opts.allow_large = allow_large;

    std::string command;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed()) {
            command = subs[i]->get_name();
            if (seed_opts[i]->count() > 0) opts.seed = seed;
        }
    }

    try {
        const auto config = newman::parse_config(read_file(config_path));
        const auto result = newman::run_command(command, config, opts);
        for (const auto& p : result.outputs) std::cout << p.string() << "\n";
        return newman::kExitOk;
    } catch (const newman::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return newman::kExitNumerical;
    } catch (const newman::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return newman::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return newman::kExitNumerical;
    }
}
