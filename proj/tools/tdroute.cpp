#include "tdroute/cli.hpp"

int main(int argc, char** argv) { return tdroute::cli::dispatch(argc, argv); }
