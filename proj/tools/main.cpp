#include "hexcpg/cli.hpp"

int main(int argc, char** argv) { return hexcpg::run_cli(argc, argv); }
