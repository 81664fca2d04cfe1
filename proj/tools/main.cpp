#include "cpphase/cli.hpp"

int main(int argc, char** argv) { return cpphase::cli::run(argc, argv); }
