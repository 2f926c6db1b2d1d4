#include "blocktrace/harness.hpp"

int main(int argc, char** argv) { return blocktrace::cli_main(argc, argv); }
