#include "bdi/cli/commands.hpp"

int main(int argc, char** argv) { return bdi::cli::run_cli(argc, argv); }
