#pragma once

#include <stdexcept>
#include <string>

namespace hybuse {

// Invalid inputs raise std::invalid_argument and domain violations raise
// std::domain_error.  The types below cover failures that need their own
// identity: malformed text input, malformed binary input, and numerical
// procedures that cannot deliver a result.

struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct format_error : std::runtime_error {
  explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hybuse
