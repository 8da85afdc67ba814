#include "cwi/cli.hpp"

int main(int argc, char** argv) { return cwi::run_cli(argc, argv); }
