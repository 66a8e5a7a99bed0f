#include "commands.hpp"

int main(int argc, char** argv) { return reskernel::cli::run(argc, argv); }
