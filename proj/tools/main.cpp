// main.cpp — focklab executable entry point.

#include "cli.hpp"

int main(int argc, char** argv) { return focklab::cli::run(argc, argv); }
