#include <ruledframe/cli.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv)
{
    using namespace ruledframe;
    CLI::App app{"Bishop-frame ruled surfaces: analysis, meshes, curvature grids and verification"};
    app.require_subcommand(1);

    std::string config;
    cli::Overrides ov;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "curve/run config (JSON)")->required();
        sub->add_option_function<std::string>("--out", [&](const std::string& v) { ov.out = v; },
                                              "output directory (overrides $RULEDFRAME_OUT)");
        sub->add_option_function<std::string>("--kinds", [&](const std::string& v) { ov.kinds = v; },
                                              "comma list of tn1,tn2,n1n2");
        sub->add_option_function<std::size_t>("--ns", [&](std::size_t v) { ov.ns = v; }, "samples along s")
            ->check(CLI::PositiveNumber);
        sub->add_option_function<std::size_t>("--nv", [&](std::size_t v) { ov.nv = v; }, "samples along v")
            ->check(CLI::PositiveNumber);
        sub->add_option_function<double>("--theta0", [&](double v) { ov.theta0 = v; }, "Bishop gauge angle");
    };
    for (const char* name : {"analyze", "mesh", "grid", "verify"})
        add_common(app.add_subcommand(name, std::string(name) + " the surfaces of a curve"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    return cli::run(command, config, ov, std::cout, std::cerr);
}
