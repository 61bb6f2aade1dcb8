#include "mfs/cli.hpp"

int main(int argc, char** argv) { return mfs::cli::main(argc, argv); }
