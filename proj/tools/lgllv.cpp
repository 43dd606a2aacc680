#include <iostream>

#include "lgllv/cli/app.hpp"

int main(int argc, char** argv) { return lgllv::run_cli(argc, argv, std::cout, std::cerr); }
