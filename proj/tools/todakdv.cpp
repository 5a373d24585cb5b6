#include "todakdv/cli.hpp"

int main(int argc, char** argv) { return todakdv::cli::run(argc, argv); }
