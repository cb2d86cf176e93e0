#include <vdw/cli.hpp>

int main(int argc, char** argv) { return vdw::run_cli(argc, argv); }
