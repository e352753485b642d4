#include "sewedflow/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sewedflow::run_command_line(argc, argv, std::cout, std::cerr); }
