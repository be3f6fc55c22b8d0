#include <iostream>

#include "ssdpp/cli.hpp"

int main(int argc, char** argv) { return ssdpp::run_cli(argc, argv, std::cout, std::cerr); }
