#pragma once

#include <stdexcept>
#include <string>

namespace rigidity {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define RIGIDITY_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                       \
    public:                                                           \
        using Error::Error;                                           \
        const char* kind() const noexcept override { return #Name; }  \
    };

RIGIDITY_DEFINE_ERROR(RangeError)
RIGIDITY_DEFINE_ERROR(PoleError)
RIGIDITY_DEFINE_ERROR(ExponentPole)
RIGIDITY_DEFINE_ERROR(DegenerateGamma)
RIGIDITY_DEFINE_ERROR(ShapeMismatch)
RIGIDITY_DEFINE_ERROR(DegenerateGradient)
RIGIDITY_DEFINE_ERROR(NonPositiveField)
RIGIDITY_DEFINE_ERROR(NegativeBranch)
RIGIDITY_DEFINE_ERROR(PositivityLoss)
RIGIDITY_DEFINE_ERROR(StiffnessAbort)
RIGIDITY_DEFINE_ERROR(SingularOperator)
RIGIDITY_DEFINE_ERROR(NotOnShell)
RIGIDITY_DEFINE_ERROR(ConfigError)

#undef RIGIDITY_DEFINE_ERROR

}  // namespace rigidity
