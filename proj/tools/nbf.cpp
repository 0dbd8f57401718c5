#include "nbf/cli.hpp"

int main(int argc, char** argv) { return nbf::cli::run(argc, argv); }
