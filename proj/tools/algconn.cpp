#include "algconn/cli.hpp"

int main(int argc, char** argv) { return algconn::cli::run(argc, argv); }
