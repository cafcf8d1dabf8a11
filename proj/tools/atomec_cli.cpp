#include "atomec/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return atomec::run_cli(argc, argv, std::cout, std::cerr);
}
