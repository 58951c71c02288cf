#include "fnr/cli.hpp"

int main(int argc, char** argv) { return fnr::cli::run_cli(argc, argv); }
