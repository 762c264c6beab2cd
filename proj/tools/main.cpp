#include "tubeform/report.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return tubeform::run_cli(args, std::cout, std::cerr);
}
