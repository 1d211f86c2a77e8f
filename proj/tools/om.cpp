#include "om/cli.hpp"

int main(int argc, char** argv) { return om::cli::run(argc, argv); }
