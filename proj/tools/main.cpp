#include "hmmrd/cli.hpp"

int main(int argc, char** argv) {
  return hmmrd::cli_main(argc, argv);
}
