#include "cli.hpp"

int main(int argc, char** argv) { return irrisim_cli::run_cli(argc, argv); }
