#include "spantri/cli.hpp"

int main(int argc, char** argv) { return spantri::run(argc, argv); }
