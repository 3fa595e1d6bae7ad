#include "geoinf/cli.hpp"

int main(int argc, char** argv) { return geoinf::cli::run(argc, argv); }
