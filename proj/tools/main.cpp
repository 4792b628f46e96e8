#include "starcore/cli.hpp"

int main(int argc, char** argv) {
  return starcore::run_cli({argv + 1, argv + argc});
}
