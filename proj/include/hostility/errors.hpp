#pragma once

#include <stdexcept>
#include <string>

namespace hostility {

// Error taxonomy, mapped to CLI exit codes:
//   ConfigError -> 1 (usage / configuration)
//   DataError   -> 2 (malformed or inconsistent input data)
//   TrainError  -> 3 (training / numerical failure)

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hostility
