#include "subfou/cli.hpp"

int main(int argc, char** argv) { return subfou::dispatch(argc, argv); }
