#include "hovelkit/cli.hpp"

int main(int argc, char** argv) { return hovelkit::run(argc, argv); }
