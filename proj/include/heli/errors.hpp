#ifndef HELI_ERRORS_HPP
#define HELI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace heli {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidField : public Error {
  public:
    using Error::Error;
};

class GridMismatch : public Error {
  public:
    using Error::Error;
};

class AsymmetricSpectrum : public Error {
  public:
    using Error::Error;
};

class FormatError : public Error {
  public:
    using Error::Error;
};

class TruncatedFile : public Error {
  public:
    using Error::Error;
};

class OutOfDomain : public Error {
  public:
    using Error::Error;
};

class EpsilonTooLarge : public Error {
  public:
    using Error::Error;
};

class EpsilonUnderResolved : public Error {
  public:
    using Error::Error;
};

class InsufficientData : public Error {
  public:
    using Error::Error;
};

class CostGuard : public Error {
  public:
    using Error::Error;
};

class InvalidParams : public Error {
  public:
    using Error::Error;
};

class InvalidRadius : public Error {
  public:
    using Error::Error;
};

class ShellUnderResolved : public Error {
  public:
    using Error::Error;
};

class DomainMismatch : public Error {
  public:
    using Error::Error;
};

class StepTooLarge : public Error {
  public:
    using Error::Error;
};

class NeedBackwardFlow : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace heli

#endif
