#include "driftgreen/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return driftgreen::cli::run(argc, argv, std::cout, std::cerr);
}
