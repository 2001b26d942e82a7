#include <string>
#include <vector>

#include "flowcube/cli.hpp"

int main(int argc, char** argv) {
    return flowcube::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
