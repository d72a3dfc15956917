#include "prophet/cli.hpp"

int main(int argc, char** argv) { return prophet::cli::run(argc, argv); }
