#include "cdpath/cli.hpp"

int main(int argc, char** argv) { return cdpath::run_cli(argc, argv); }
