#include "cli_main.hpp"

int main(int argc, char** argv) { return discenv::cli::cli_main(argc, argv); }
