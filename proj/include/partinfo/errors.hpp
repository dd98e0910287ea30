// Error types shared by all partinfo components.

#ifndef PARTINFO_ERRORS_HPP
#define PARTINFO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace partinfo {

/// Base class for all partinfo errors.
class error : public std::runtime_error {
   public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument handed to an operation (bad dimension, bad range, ...).
class argument_error : public error {
   public:
    explicit argument_error(const std::string& what) : error(what) {}
};

/// A matrix required to be positive definite failed its factorization.
/// Carries the index of the failing pivot.
class not_positive_definite_error : public error {
   public:
    not_positive_definite_error(const std::string& what, std::size_t pivot)
        : error(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

   private:
    std::size_t pivot_;
};

/// Iterative routine exceeded its iteration cap. Carries the residual norm reached.
class convergence_error : public error {
   public:
    convergence_error(const std::string& what, double residual)
        : error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

   private:
    double residual_;
};

/// A transform that must have full row rank does not.
class rank_error : public error {
   public:
    explicit rank_error(const std::string& what) : error(what) {}
};

/// An internal cross-check failed; indicates a bug, not bad input.
class consistency_error : public error {
   public:
    explicit consistency_error(const std::string& what) : error(what) {}
};

/// Malformed text input (matrix file, config file). Carries a line number.
class parse_error : public error {
   public:
    parse_error(const std::string& what, std::size_t line)
        : error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

   private:
    std::size_t line_;
};

/// Invalid experiment configuration.
class config_error : public error {
   public:
    explicit config_error(const std::string& what) : error(what) {}
};

}  // namespace partinfo

#endif  // PARTINFO_ERRORS_HPP
