#include "zoomax/cli.hpp"

int main(int argc, char** argv) {
  return zoomax::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
