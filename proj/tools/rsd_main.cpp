#include "rsd/bench.hpp"

int main(int argc, char** argv) { return rsd::cli(argc, argv); }
