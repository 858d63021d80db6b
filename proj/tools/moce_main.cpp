#include <vector>

#include "certeq/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return certeq::run_cli(args);
}
