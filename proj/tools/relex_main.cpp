#include "relex/cli.h"

int main(int argc, char** argv) { return relex::cli_main(argc, argv); }
