#include "bmn/cli.hpp"

int main(int argc, char** argv) { return bmn::run_cli(argc, argv); }
