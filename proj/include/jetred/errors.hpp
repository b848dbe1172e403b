#pragma once

#include <stdexcept>
#include <string>

namespace jetred {

// Base class for everything the engine throws. The CLI turns these into
// structured diagnostics and exit code 2.
class error : public std::runtime_error {
 public:
  explicit error(std::string msg) : std::runtime_error(std::move(msg)) {}
};

class parse_error : public error {
 public:
  parse_error(std::string msg, std::size_t position)
      : error(std::move(msg)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class unknown_identifier_error : public parse_error {
 public:
  unknown_identifier_error(std::string ident, std::size_t position)
      : parse_error("unknown identifier '" + ident + "'", position),
        identifier_(std::move(ident)) {}
  const std::string& identifier() const { return identifier_; }

 private:
  std::string identifier_;
};

// Jet order would exceed the chart's order cap.
class order_cap_error : public error {
 public:
  order_cap_error(int needed, int cap)
      : error("jet order " + std::to_string(needed) +
              " exceeds order cap " + std::to_string(cap)),
        needed_(needed),
        cap_(cap) {}
  int needed() const { return needed_; }
  int cap() const { return cap_; }

 private:
  int needed_;
  int cap_;
};

class eval_error : public error {
 public:
  using error::error;
};

// The randomized equality oracle could not draw any admissible sample point.
class sampling_error : public error {
 public:
  using error::error;
};

// Residual dependence on orbit coordinates after restriction to Inv_G.
class invariance_violation : public error {
 public:
  using error::error;
};

// A contracted form kept components along orbit-coordinate differentials.
class basicness_violation : public error {
 public:
  using error::error;
};

// Problem-file schema or load-time invariant failure.
class validation_error : public error {
 public:
  validation_error(std::string where, std::string reason)
      : error(where + ": " + reason), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

class degree_error : public error {
 public:
  using error::error;
};

// l2_hat was given a reduced expression that does not match rho_X of its
// claimed representative.
class representative_mismatch : public error {
 public:
  using error::error;
};

}  // namespace jetred
