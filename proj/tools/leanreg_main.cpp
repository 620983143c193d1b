#include "leanreg/harness.hpp"

int main(int argc, char** argv) { return leanreg::run_cli(argc, argv); }
