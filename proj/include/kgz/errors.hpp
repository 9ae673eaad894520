#pragma once

#include <stdexcept>
#include <string>

namespace kgz {

/// A propagation produced non-finite coefficients. Carries the sweep cell
/// that blew up so runners can tag the failure.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double c, double tau, double time)
      : std::runtime_error("divergence: non-finite field at c=" + std::to_string(c) +
                           ", tau=" + std::to_string(tau) + ", t=" + std::to_string(time)),
        c_(c),
        tau_(tau),
        time_(time) {}

  double c() const { return c_; }
  double tau() const { return tau_; }
  double time() const { return time_; }

 private:
  double c_;
  double tau_;
  double time_;
};

}  // namespace kgz
