#include "nfmkdv/cli.hpp"

int main(int argc, char** argv) { return nfmkdv::dispatch(argc, argv); }
