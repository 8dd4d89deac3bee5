#include "kingis/cli.hpp"

int main(int argc, char** argv) { return kingis::cli::run(argc, argv); }
