#include "simcost/cli.hpp"

int main(int argc, char** argv) { return simcost::run_cli(argc, argv); }
