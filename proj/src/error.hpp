#ifndef AMRBENCH_ERROR_HPP_
#define AMRBENCH_ERROR_HPP_
//! \file error.hpp
//! \brief Error codes shared across the library and surfaced through the C API.

#include <stdexcept>
#include <string>

namespace amrbench {

enum class ErrorCode {
  InvalidArgument,
  NonMultipleMesh,
  BadDimension,
  UnknownLeaf,
  UnknownProfile,
  ShapeMismatch,
  ScheduleMismatch,
  MissingBuffer,
  ParseError,
  ValidationError,
  NumericalFailure,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string what) : std::runtime_error(std::move(what)), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) { throw Error(code, what); }

} // namespace amrbench

#endif // AMRBENCH_ERROR_HPP_
