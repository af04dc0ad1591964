#include "cvbell/cli/app.hpp"

int main(int argc, char** argv) { return cvbell::cli::run(argc, argv); }
