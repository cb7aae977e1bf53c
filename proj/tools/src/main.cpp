#include "hcolor/cli.hpp"

int main(int argc, char** argv) { return hcolor::cli::execute(argc, argv); }
