#include "cli_app.hpp"

int main(int argc, char** argv) { return pptdist::cli::run(argc, argv); }
