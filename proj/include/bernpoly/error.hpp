#pragma once

#include <stdexcept>
#include <string>

namespace bernpoly {

/** Base class of every exception thrown by the library. */
class Error : public std::runtime_error
{
    public:
        explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** A value violates a documented invariant (negative mass, bad sum, ...). */
class InvalidArgument : public Error
{
    public:
        explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/** An index, level or order lies outside its admissible range. */
class OutOfRange : public Error
{
    public:
        explicit OutOfRange(const std::string& what) : Error(what) {}
};

/** Two objects that must share a dimension d do not. */
class DimensionMismatch : public Error
{
    public:
        explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/** The requested dimension exceeds a dense or combinatorial guard. */
class GuardExceeded : public Error
{
    public:
        explicit GuardExceeded(const std::string& what) : Error(what) {}
};

/** A constrained class P(p, theta) is empty. */
class Infeasible : public Error
{
    public:
        explicit Infeasible(const std::string& what) : Error(what) {}
};

/** The operation is not defined for the given configuration. */
class Unsupported : public Error
{
    public:
        explicit Unsupported(const std::string& what) : Error(what) {}
};

}   // namespace bernpoly
