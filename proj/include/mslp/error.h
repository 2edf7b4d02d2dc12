// Copyright 2026 The MSLP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MSLP_ERROR_H_
#define MSLP_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace mslp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-side contract was violated: bad dimensions, unknown node, a
// parameter outside its valid range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Iterative solvers that did not converge, singular systems, non-finite values.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, std::vector<double> residuals = {})
      : Error(what), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

}  // namespace mslp

#endif  // MSLP_ERROR_H_
