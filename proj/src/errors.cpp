#include "roughlab/errors.hpp"

namespace roughlab {

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace roughlab
