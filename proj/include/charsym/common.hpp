#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

namespace charsym {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/* Error taxonomy. Every throw site uses one of these so the CLI boundary can
   map failures onto its documented exit codes: ParseError -> 1, any
   PreconditionError -> 2, PrecisionExhausted -> 3. */
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define CHARSYM_PRECONDITION_ERROR(NAME)            \
  struct NAME : PreconditionError {                 \
    using PreconditionError::PreconditionError;     \
  }

CHARSYM_PRECONDITION_ERROR(NonUnitResidue);
CHARSYM_PRECONDITION_ERROR(NonUnit);
CHARSYM_PRECONDITION_ERROR(RingMismatch);
CHARSYM_PRECONDITION_ERROR(TruncationTooSmall);
CHARSYM_PRECONDITION_ERROR(NotHeightTwo);
CHARSYM_PRECONDITION_ERROR(NotGraphForm);
CHARSYM_PRECONDITION_ERROR(ChainNotNested);
CHARSYM_PRECONDITION_ERROR(UnitRatio);
CHARSYM_PRECONDITION_ERROR(SupportIncomplete);
CHARSYM_PRECONDITION_ERROR(EvenCharacter);
CHARSYM_PRECONDITION_ERROR(TrivialCharacter);
CHARSYM_PRECONDITION_ERROR(RamifiedConductor);
CHARSYM_PRECONDITION_ERROR(NotFundamental);
CHARSYM_PRECONDITION_ERROR(NotCoprime);
CHARSYM_PRECONDITION_ERROR(NotFinite);
CHARSYM_PRECONDITION_ERROR(NoStableFit);

#undef CHARSYM_PRECONDITION_ERROR

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64((u128)a * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline u64 gcd_u64(u64 a, u64 b) {
  while (b) { u64 t = a % b; a = b; b = t; }
  return a;
}

}  // namespace charsym
