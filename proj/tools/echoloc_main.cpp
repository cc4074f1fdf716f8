#include "echoloc/io.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Pointwise spectral geometry experiments on flat and hyperbolic surfaces"};
    app.require_subcommand(1);

    std::string config;
    std::string output = ".";
    for (const auto& name : echoloc::subcommands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("config", config, "Experiment config (key = value lines)")->required();
        sub->add_option("-o,--output", output, "Output directory")->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string sub = app.get_subcommands().front()->get_name();
    return echoloc::run(sub, config, output, std::cout, std::cerr);
}
