#include "corridor/cli.hpp"

int main(int argc, char** argv) { return corridor::cli::run(argc, argv); }
