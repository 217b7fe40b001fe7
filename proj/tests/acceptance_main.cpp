#include <iostream>

#include "modalwb/verify.hpp"

int main() {
  modalwb::VerifyResult r = modalwb::verify_all(std::cout, 0);
  return r.all_pass() ? 0 : 1;
}
