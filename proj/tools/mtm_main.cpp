#include "mtm/harness/commands.hpp"

int main(int argc, char** argv) { return mtm::harness::run_cli(argc, argv); }
