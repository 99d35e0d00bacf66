#include <helmlab/cli.hpp>

int main(int argc, char **argv) { return helmlab::cli::main_entry(argc, argv); }
