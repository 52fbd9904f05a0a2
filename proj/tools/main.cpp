#include <iostream>

#include "stadion/cli.hpp"

int main(int argc, char** argv)
{
    return stadion::cli::run_args(argc, argv, std::cout, std::cerr);
}
