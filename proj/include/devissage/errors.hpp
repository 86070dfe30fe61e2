#pragma once

#include <stdexcept>
#include <string>

namespace devissage {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define DEVISSAGE_ERROR(Name)                                                  \
  struct Name : Error {                                                        \
    explicit Name(const std::string &what) : Error(#Name ": " + what) {}       \
  }

DEVISSAGE_ERROR(MismatchedPrime);
DEVISSAGE_ERROR(MismatchedBase);
DEVISSAGE_ERROR(PrecisionExhausted);
DEVISSAGE_ERROR(NotWellDefined);
DEVISSAGE_ERROR(NotComposable);
DEVISSAGE_ERROR(NotLiftable);
DEVISSAGE_ERROR(InputNotExact);
DEVISSAGE_ERROR(NotDivisible);
DEVISSAGE_ERROR(NotFiniteExponent);
DEVISSAGE_ERROR(UnsupportedCarrier);
DEVISSAGE_ERROR(WeilCheckFailed);
DEVISSAGE_ERROR(MissingDualData);
DEVISSAGE_ERROR(InvalidGraph);
DEVISSAGE_ERROR(EnumerationCapExceeded);
DEVISSAGE_ERROR(BalanceViolated);
DEVISSAGE_ERROR(NotASpanningTree);
DEVISSAGE_ERROR(ConfigIncompatible);
DEVISSAGE_ERROR(NotAnOrbit);
DEVISSAGE_ERROR(GcdShortfall);
DEVISSAGE_ERROR(UnknownSequence);
DEVISSAGE_ERROR(ParseError);
DEVISSAGE_ERROR(InternalError);

#undef DEVISSAGE_ERROR

} // namespace devissage
