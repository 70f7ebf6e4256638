#include "asb/cli.hpp"

int main(int argc, char** argv) { return asb::cli::run(argc, argv); }
