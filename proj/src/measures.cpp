#include "cubelam/measures.hpp"

namespace cubelam {

std::string to_string(TreeInvariant inv) {
  switch (inv) {
    case TreeInvariant::Barycenter:
      return "barycenter";
    case TreeInvariant::RankOne:
      return "rank-one";
    case TreeInvariant::LambdaRange:
      return "lambda-range";
  }
  return "unknown";
}

}  // namespace cubelam
