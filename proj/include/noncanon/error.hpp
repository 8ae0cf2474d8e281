#pragma once

#include <stdexcept>
#include <string>

namespace noncanon {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed vocabulary, merges, config or JSONL input.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Text that the vocabulary cannot cover (non-byte-level vocabularies only).
class EncodingError : public Error {
 public:
  using Error::Error;
};

// A record that cannot be processed under the requested mode.
class DataError : public Error {
 public:
  using Error::Error;
};

// Grammar provider or network failure.
class ProviderError : public Error {
 public:
  using Error::Error;
};

}  // namespace noncanon
