#include "commands.hpp"

int main(int argc, char** argv) { return hitlab::app::run_cli(argc, argv); }
