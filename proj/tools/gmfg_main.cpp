#include <string>
#include <vector>

#include "gmfg/cli.hpp"

int main(int argc, char** argv) {
    return gmfg::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
