#include <iostream>

#include "unfold/mesh_io.hpp"
#include "unfold/meshes.hpp"

int main(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::cout << "unfolder: subcommands not wired up yet\n";
    return 0;
}
