// Error taxonomy shared by every module.
//
// ContractError: a caller violated a documented precondition (bad measure
//   masses, non-bijective relabeling, mismatched resolutions, ...).
// SizeError: an enumeration bound was exceeded; the requested computation is
//   well defined but outside the supported scale.
// IoError: a file could not be read, parsed, or written.
//
// The CLI maps all three to exit code 1; usage problems (unknown flags,
// missing arguments) are reported by the argument parser with exit code 2.

#pragma once

#include <stdexcept>
#include <string>

namespace gridlab {

class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

class SizeError : public ContractError {
 public:
  explicit SizeError(const std::string& what) : ContractError(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gridlab
