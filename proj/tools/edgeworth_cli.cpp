#include "edgeworth/cli.hpp"

int main(int argc, char** argv) { return edgeworth::cli_main(argc, argv); }
