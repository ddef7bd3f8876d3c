#include "fluxon/cli/commands.hpp"

int main(int argc, char** argv) { return fluxon::cli::run_cli(argc, argv); }
