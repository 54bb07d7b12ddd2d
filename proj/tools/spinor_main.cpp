#include "spinor/cli.hpp"

int main(int argc, char** argv) { return spinor::run_cli(argc, argv); }
