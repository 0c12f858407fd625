#include "cli.hpp"

int main(int argc, char** argv) { return spectra_lab::cli::run(argc, argv); }
