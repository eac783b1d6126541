#include "chemorep/cli/commands.hpp"
#include "chemorep/cli/config.hpp"
#include "chemorep/error.hpp"

#include <fmt/format.h>

#include <iostream>

int main(int argc, char** argv)
{
    using namespace chemorep;
    try {
        auto parsed = cli::parse_command_line(argc, argv);
        if (!parsed.config) return parsed.exit_code;
        return cli::dispatch(*parsed.config, std::cout);
    } catch (const InvalidArgument& e) {
        std::cerr << fmt::format("error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::cerr << fmt::format("error: {}\n", e.what());
        return 1;
    }
}
