#include "vvlab/cli.hpp"

int main(int argc, char** argv) { return vvlab::cli::main(argc, argv); }
