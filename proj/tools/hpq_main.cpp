#include "hpq/cli.hpp"

int main(int argc, char** argv) { return hpq::cli::run(argc, argv); }
