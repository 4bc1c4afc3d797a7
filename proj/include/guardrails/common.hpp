#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace guardrails {

constexpr double kStandardGravity = 9.80665;
constexpr double kFeetToMeters = 0.3048;
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// h_I reported when a rollout leaves the model's valid domain
constexpr double kDomainExitSentinel = -1e9;

inline double ft_to_m(double ft) { return ft * kFeetToMeters; }
inline double m_to_ft(double m) { return m / kFeetToMeters; }
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

class SingularityError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class ModelDomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UprightViolation : public ModelDomainError {
public:
  using ModelDomainError::ModelDomainError;
};

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class MissingFieldError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace guardrails
