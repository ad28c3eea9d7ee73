#pragma once

#include <stdexcept>
#include <string>

namespace ynote {

// Base class for all library errors. Specific error types live with the
// module that raises them.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ynote
