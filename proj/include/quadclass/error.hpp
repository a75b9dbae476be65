#pragma once

#include <stdexcept>
#include <string>

namespace quadclass {

/* Base of every recoverable error raised by the library. */
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/* Factoring budget (trial division bound or rho iteration cap) exhausted.
 * Callers sweeping a grid skip the instance instead of aborting. */
class EffortExceeded : public Error
{
  public:
    using Error::Error;
};

/* A configured size limit (enumeration bound on |D|, structure bound on h)
 * would be exceeded. */
class BoundExceeded : public Error
{
  public:
    using Error::Error;
};

/* Sequence index above the configured cap. */
class CapExceeded : public Error
{
  public:
    using Error::Error;
};

/* The family member is Q(i), which the divisibility statement excludes. */
class QiExcluded : public Error
{
  public:
    using Error::Error;
};

class RemoteError : public Error
{
  public:
    using Error::Error;
};

class ParseError : public Error
{
  public:
    using Error::Error;
};

} // namespace quadclass
