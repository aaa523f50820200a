#include "slr/bench/cli.hpp"

int main(int argc, char** argv) { return slr::bench::run_cli(argc, argv); }
