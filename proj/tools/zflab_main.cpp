// Command line driver; subcommands are filled in as the library grows.
#include <cstdio>

#include "zflab/fields.hpp"
#include "zflab/fock.hpp"
#include "zflab/operators.hpp"

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::puts("zflab: subcommands not wired up yet");
  return 2;
}
