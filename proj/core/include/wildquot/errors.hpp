#pragma once

#include <stdexcept>
#include <string>

namespace wildquot {

/* Every failure the library can signal derives from Error.  Callers that
 * want to distinguish failure modes catch the concrete type; callers that
 * only want a message catch Error. */
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* ---- coefficient ring construction ---- */
struct NotPrime : Error { using Error::Error; };
struct NotEisenstein : Error { using Error::Error; };

/* ---- arithmetic ---- */
struct NotAUnit : Error { using Error::Error; };
/* Raised whenever a result cannot be certified at the working precision:
 * a valuation that would have to be read below the precision floor, a
 * shift past the stored digits, an unstable kernel rank, ... */
struct PrecisionLoss : Error { using Error::Error; };

/* ---- series / contexts ---- */
struct MixedContext : Error { using Error::Error; };
struct SubstitutionEscapesMaximalIdeal : Error { using Error::Error; };
struct NotRegularParameter : Error { using Error::Error; };

/* ---- automorphisms ---- */
struct NotOrderP : Error { using Error::Error; };
struct OrderNotVerified : Error { using Error::Error; };
struct WrongShape : Error { using Error::Error; };

/* ---- ramification / trace form ---- */
struct WrongCase : Error { using Error::Error; };
struct CrossCheckFailed : Error { using Error::Error; };
struct HypothesisViolated : Error { using Error::Error; };

/* ---- derivations ---- */
struct NotPLie : Error { using Error::Error; };
struct NotInImage : Error { using Error::Error; };
struct Inconsistent : Error { using Error::Error; };

/* ---- input handling ---- */
struct ParseError : Error { using Error::Error; };

}  // namespace wildquot
