#include "urt/cli.hpp"

int main(int argc, char** argv) { return urt::cli::main_entry(argc, argv); }
