#ifndef CTSEG_ERRORS_HPP
#define CTSEG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ctseg {

// Malformed or inconsistent input data (files, directories, manifests, specs).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A segmentation stage failed on otherwise loadable data.
struct PipelineError : std::runtime_error {
  explicit PipelineError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ctseg

#endif
