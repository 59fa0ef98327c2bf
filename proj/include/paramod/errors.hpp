#pragma once

#include <stdexcept>
#include <string>

namespace paramod {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define PARAMOD_ERROR(Name)                                        \
    struct Name : Error {                                          \
        explicit Name(const std::string& what_ = #Name) : Error(what_) {} \
    }

PARAMOD_ERROR(InvalidPrime);
PARAMOD_ERROR(ScaleOverflow);
PARAMOD_ERROR(NotSymplectic);
PARAMOD_ERROR(NonIntegral);
PARAMOD_ERROR(NotConjugatable);
PARAMOD_ERROR(ChartMismatch);
PARAMOD_ERROR(GeneratorInvalid);
PARAMOD_ERROR(SingularDenominator);
PARAMOD_ERROR(NotInGroup);
PARAMOD_ERROR(NotInGammaStar);
PARAMOD_ERROR(WindowOverflow);
PARAMOD_ERROR(FTableTooSmall);
PARAMOD_ERROR(CapTooLarge);
PARAMOD_ERROR(PrecisionLoss);
PARAMOD_ERROR(ConstancyFailure);
PARAMOD_ERROR(AuditFailed);
PARAMOD_ERROR(ParseError);

#undef PARAMOD_ERROR

} // namespace paramod
