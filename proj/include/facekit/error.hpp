#ifndef FACEKIT_ERROR_HPP
#define FACEKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace facekit {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace facekit

#endif
