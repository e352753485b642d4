#pragma once

#include <stdexcept>
#include <string>

namespace sewedflow {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownFamily : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class InvalidSet : public Error {
public:
    using Error::Error;
};

/// The integral curve leaves the working window before it meets the switching line again.
class NoReturn : public Error {
public:
    using Error::Error;
};

/// Launch point sits on the fold (x = 0), where both half fields are tangent to the switching line.
class Tangency : public Error {
public:
    using Error::Error;
};

class StepUnderflow : public Error {
public:
    using Error::Error;
};

class LeftWindow : public Error {
public:
    using Error::Error;
};

class NotApplicable : public Error {
public:
    using Error::Error;
};

class BadBracket : public Error {
public:
    using Error::Error;
};

class Undetermined : public Error {
public:
    using Error::Error;
};

class PreconditionFailed : public Error {
public:
    using Error::Error;
};

} // namespace sewedflow
