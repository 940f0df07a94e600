#include "scnet/cli.hpp"

int main(int argc, char** argv) { return scnet::cli::main(argc, argv); }
