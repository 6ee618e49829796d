#include "edscat/cli.hpp"

int main(int argc, char** argv) { return edscat::cli::run(argc, argv); }
