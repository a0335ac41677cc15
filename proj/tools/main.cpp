#include "ctt/cli.hpp"

int main(int argc, char** argv) { return ctt::cli::run(argc, argv); }
