#include "sawecho/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sawecho::cli::run(argc, argv, std::cout, std::cerr); }
