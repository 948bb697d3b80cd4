#include "qmaforge/cli.hpp"

int main(int argc, char** argv) { return qmaforge::cli::run(argc, argv); }
