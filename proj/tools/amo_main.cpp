#include "cli/cli.hpp"

int main(int argc, char** argv) { return amo::cli::run(argc, argv); }
