#include "commands.hpp"

int main(int argc, char** argv) { return steklov_cli::run(argc, argv); }
