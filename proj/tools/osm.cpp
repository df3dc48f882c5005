#include "osm/cli.hpp"

int main(int argc, char** argv) { return osm::cli_main(argc, argv); }
