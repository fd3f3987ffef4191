#include "lat/cli.hpp"

int main(int argc, char** argv) { return lat::cli::run(argc, argv); }
