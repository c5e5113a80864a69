#include "dropctl/verdict.hpp"

namespace dropctl {

const char* to_string(Status status) {
  switch (status) {
    case Status::holds: return "holds";
    case Status::fails: return "fails";
    case Status::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace dropctl
