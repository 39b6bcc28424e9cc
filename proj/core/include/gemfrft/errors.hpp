#ifndef GEMFRFT_ERRORS_HPP
#define GEMFRFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gemfrft {

// Error hierarchy. The CLI maps these onto its exit-code contract:
// config errors -> 2, numerical failures -> 3, I/O errors -> 4.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

class invalid_parameter : public error {
public:
    using error::error;
};

// Signal support clipped by a grid or stage window.
class truncation_error : public error {
public:
    using error::error;
};

// Sampling too coarse for the requested transform (phase advancing
// faster than pi per sample, wrapped Wigner correlation window, ...).
class resolution_error : public error {
public:
    using error::error;
};

// Solver self-check failed (energy ledger imbalance, non-finite state).
class numerical_failure : public error {
public:
    using error::error;
};

class calibration_error : public error {
public:
    using error::error;
};

class config_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

} // namespace gemfrft

#endif
