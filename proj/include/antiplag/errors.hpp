#pragma once

#include <stdexcept>
#include <string>

namespace antiplag {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ANTIPLAG_DECLARE_ERROR(Name)            \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  }

ANTIPLAG_DECLARE_ERROR(EmptyDocument);
ANTIPLAG_DECLARE_ERROR(OffsetOutOfRange);
ANTIPLAG_DECLARE_ERROR(ConfigError);
ANTIPLAG_DECLARE_ERROR(QueryRejected);
ANTIPLAG_DECLARE_ERROR(ProviderUnavailable);
ANTIPLAG_DECLARE_ERROR(StorageFailure);
ANTIPLAG_DECLARE_ERROR(MissingSource);
ANTIPLAG_DECLARE_ERROR(InsufficientSourcePool);
ANTIPLAG_DECLARE_ERROR(SentenceTooShort);
ANTIPLAG_DECLARE_ERROR(IoFailure);
ANTIPLAG_DECLARE_ERROR(InvalidReport);

#undef ANTIPLAG_DECLARE_ERROR

}  // namespace antiplag
