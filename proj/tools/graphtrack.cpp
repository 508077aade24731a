#include "graphtrack/app.hpp"
#include "graphtrack/config.hpp"
#include "graphtrack/errors.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>
#include <optional>

namespace cfg = graphtrack::config;

int main(int argc, char** argv) {
    CLI::App cli{"Detect, link and analyze moving circular objects in frame sequences."};
    cli.set_help_all_flag("--help-all", "List every configuration override flag");

    std::string config_path;
    std::vector<std::string> input;
    bool check = false;
    bool print_config = false;
    cli.add_option("--config", config_path, "INI file; flags override its values")->check(CLI::ExistingFile);
    cli.add_option("--input", input, "frame directory, glob, or list of frame files");
    cli.add_flag("--check", check, "bench: compare against the acceptance thresholds, exit 3 on failure");
    cli.add_flag("--print-config", print_config, "print the resolved configuration and exit");

    // One override per key; --mode, --seed, --threads, --output-dir sit in the main group.
    std::map<std::string, std::string> flag_values;
    for (const auto& k : cfg::keys()) {
        if (k.key == "input") {
            continue;
        }
        const bool main_group = k.key == "mode" || k.key == "seed" || k.key == "threads" || k.key == "output_dir";
        std::string name = "--" + k.key;
        if (k.key == "output_dir") {
            name = "--output-dir,--output_dir";
        }
        auto* opt = cli.add_option(name, flag_values[k.key], k.help);
        opt->group(main_group ? "Options" : "[" + k.section + "]");
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return graphtrack::app::kExitError;
    }

    cfg::RunConfig config;
    try {
        cfg::RawValues raw;
        if (!config_path.empty()) {
            raw = cfg::read_ini(config_path);
        }
        for (const auto& [key, value] : flag_values) {
            const auto opt_name = key == "output_dir" ? std::string("--output-dir") : "--" + key;
            if (cli.count(opt_name) > 0) {
                raw[key] = value;
            }
        }
        config = cfg::resolve(raw);
    } catch (const graphtrack::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return graphtrack::app::kExitError;
    }
    if (!input.empty()) {
        config.input = input;
    }
    config.check = check;

    if (print_config) {
        std::cout << cfg::to_ini(config);
        return graphtrack::app::kExitOk;
    }
    return graphtrack::app::run(config, std::cerr);
}
