#pragma once

#include <stdexcept>
#include <string>

namespace hovelkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define HOVELKIT_ERROR(Name)                       \
    struct Name : Error {                          \
        explicit Name(const std::string& what)     \
            : Error(#Name ": " + what) {}          \
    }

HOVELKIT_ERROR(NotGCM);
HOVELKIT_ERROR(NonSquare);
HOVELKIT_ERROR(IndexOutOfRange);
HOVELKIT_ERROR(CapTooLargeForMemory);
HOVELKIT_ERROR(NotFreeRGS);
HOVELKIT_ERROR(DimensionMismatch);
HOVELKIT_ERROR(GhostWall);
HOVELKIT_ERROR(ChainViolation);
HOVELKIT_ERROR(UnsupportedShape);
HOVELKIT_ERROR(NotInStar);
HOVELKIT_ERROR(WrongFlavor);
HOVELKIT_ERROR(NotPrime);
HOVELKIT_ERROR(MNotInN);
HOVELKIT_ERROR(InconsistentSystem);
HOVELKIT_ERROR(BudgetExceeded);
HOVELKIT_ERROR(UndecidedBeyondBudget);
HOVELKIT_ERROR(ParseError);

#undef HOVELKIT_ERROR

}  // namespace hovelkit
