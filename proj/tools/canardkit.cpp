#include "canardkit/cli/commands.hpp"

int main(int argc, char** argv) { return canardkit::cli::main_entry(argc, argv, std::cout, std::cerr); }
