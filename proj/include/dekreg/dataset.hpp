#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dekreg {

/// Paired design points and responses (x_i, y_i).
///
/// Construction validates that both sides have the same length n >= 1 and hold
/// only finite values; a Dataset is immutable afterwards.
class Dataset {
 public:
  Dataset(std::vector<double> x, std::vector<double> y);

  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> y() const noexcept { return y_; }
  std::size_t size() const noexcept { return x_.size(); }

  /// Copy with observation i removed (requires size() >= 2).
  Dataset without(std::size_t i) const;
  /// Copy keeping only the listed 0-based indices, in the given order.
  Dataset subset(std::span<const std::size_t> indices) const;
  /// Same x, responses replaced by log(y); throws DomainError if any y <= 0.
  Dataset log_response() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

}  // namespace dekreg
