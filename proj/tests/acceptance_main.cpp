#include <iostream>

#include "tomaslab/acceptance.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path out = argc > 1 ? argv[1] : "acceptance_out";
  const auto summary = tomaslab::run_acceptance(out, 0, true, std::cout);
  return summary.all_passed ? 0 : 1;
}
