#pragma once

#include <stdexcept>
#include <string>

namespace ssep {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// A dictionary or analysis operator fails the full-column-rank assumption.
class RankDeficient : public Error {
public:
    using Error::Error;
};

class ZeroColumn : public Error {
public:
    explicit ZeroColumn(int column)
        : Error("column " + std::to_string(column) + " has zero norm"), column_(column) {}
    int column() const noexcept { return column_; }

private:
    int column_;
};

class TooFewColumns : public Error {
public:
    using Error::Error;
};

class KTooLarge : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class NegativeCoherence : public Error {
public:
    using Error::Error;
};

// The sparsity level violates the recovery condition the constants require.
class ThresholdViolated : public Error {
public:
    using Error::Error;
};

class GHatNonpositive : public Error {
public:
    using Error::Error;
};

class Infeasible : public Error {
public:
    using Error::Error;
};

class UnsatisfiableSparsity : public Error {
public:
    using Error::Error;
};

class ImageTooLarge : public Error {
public:
    using Error::Error;
};

// Malformed input file (matrix container, image, or sweep spec).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ssep
