#pragma once

#include <stdexcept>
#include <string>

namespace wulff {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define WULFF_DEFINE_ERROR(Name)                                  \
    class Name : public Error                                     \
    {                                                             \
    public:                                                       \
        explicit Name(const std::string& what) : Error(what) {}   \
    }

// geometry
WULFF_DEFINE_ERROR(DegenerateInput);
WULFF_DEFINE_ERROR(DimensionMismatch);
WULFF_DEFINE_ERROR(MethodUnavailable);
WULFF_DEFINE_ERROR(ZeroDirection);
WULFF_DEFINE_ERROR(SingularMatrix);
WULFF_DEFINE_ERROR(MalformedBody);

// functionals
WULFF_DEFINE_ERROR(EllipsoidNotConverged);

// mean inequalities
WULFF_DEFINE_ERROR(NegativeEntry);
WULFF_DEFINE_ERROR(OutOfRangeEntry);

// transport
WULFF_DEFINE_ERROR(SampleBudgetExceeded);
WULFF_DEFINE_ERROR(OutOfRegime);
WULFF_DEFINE_ERROR(NotTwoDimensional);
WULFF_DEFINE_ERROR(IllConditionedFit);

// lab
WULFF_DEFINE_ERROR(NotCentrallySymmetric);

#undef WULFF_DEFINE_ERROR

} // namespace wulff
