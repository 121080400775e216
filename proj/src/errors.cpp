#include "isingops/errors.hpp"

namespace isingops {

void throw_invalid(const std::string& what) { throw InvalidArgument(what); }

}  // namespace isingops
