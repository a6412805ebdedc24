#include "aa/cli.hpp"

int main(int argc, char** argv) { return aa::cli::run(argc, argv); }
