#include "steenrod/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return steenrod::cli::run_cli(argc, argv, std::cout, std::cerr);
}
