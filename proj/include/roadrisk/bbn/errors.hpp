#pragma once

#include <stdexcept>
#include <string>

namespace roadrisk::bbn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The network fails validation (fatal findings) and cannot be queried.
class InvalidNetwork : public Error {
 public:
  using Error::Error;
};

class CycleError : public InvalidNetwork {
 public:
  explicit CycleError(std::string member)
      : InvalidNetwork("cycle detected involving node '" + member + "'"),
        member_(std::move(member)) {}

  const std::string& member() const noexcept { return member_; }

 private:
  std::string member_;
};

// A node or state name that the network does not declare.
class InvalidReference : public Error {
 public:
  using Error::Error;
};

// A full assignment that misses nodes or repeats them.
class IncompleteAssignment : public Error {
 public:
  using Error::Error;
};

// The evidence has probability zero under the network.
class ImpossibleEvidence : public Error {
 public:
  ImpossibleEvidence() : Error("impossible evidence: probability of the evidence is 0") {}
};

class StateSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace roadrisk::bbn
