#include "qgt/cli.hpp"

int main(int argc, char** argv) { return qgt::cli::main(argc, argv); }
