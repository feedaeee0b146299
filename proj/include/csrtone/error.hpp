#ifndef CSRTONE_ERROR_HPP
#define CSRTONE_ERROR_HPP

#include <stdexcept>

namespace csrtone {

// Bad arguments and malformed input are reported with std::invalid_argument.
// DomainError marks inputs that are well formed but describe a configuration
// the model rejects (unstable filters, timing races, undefined objectives).
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UnstableStage : public DomainError {
public:
  UnstableStage() : DomainError("unstable feedback stage") {}
};

}  // namespace csrtone

#endif
