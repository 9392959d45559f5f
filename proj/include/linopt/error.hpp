#pragma once

#include <stdexcept>
#include <string>

namespace linopt {

// Base of every error raised by the library. Callers that only care about
// "the simulation refused this input" catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Normalizing a state whose squared norm is numerically zero. Usually an
// impossible post-selection branch.
class ZeroState : public Error {
public:
    using Error::Error;
};

class ModeCollision : public Error {
public:
    using Error::Error;
};

class InvalidCircuit : public Error {
public:
    using Error::Error;
};

class BasisNotClosed : public Error {
public:
    using Error::Error;
};

class NotSinglePhoton : public Error {
public:
    using Error::Error;
};

class QubitConditionViolated : public Error {
public:
    using Error::Error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class UnsupportedPartyCount : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

// Malformed circuit/state/pattern input. `what()` carries line or byte
// position when known.
class ParseError : public Error {
public:
    using Error::Error;
};

// A numerical invariant that should hold by construction did not.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace linopt
