#include "towerforge/cli.hpp"

int main(int argc, char** argv) { return towerforge::run_cli(argc, argv); }
