#include "nlwave/cli.hpp"

int main(int argc, char** argv) { return nlwave::cli_dispatch(argc, argv); }
