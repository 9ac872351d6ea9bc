#include "mdrk/cli.hpp"

int main(int argc, char** argv) { return mdrk::cli::run(argc, argv); }
