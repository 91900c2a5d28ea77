#include "dekreg/dataset.hpp"

#include <cmath>
#include <string>

#include "dekreg/errors.hpp"

namespace dekreg {

Dataset::Dataset(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) {
    throw InputError("dataset x and y differ in length (" + std::to_string(x_.size()) + " vs " +
                     std::to_string(y_.size()) + ")");
  }
  if (x_.empty()) throw InputError("dataset must hold at least one observation");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      throw InputError("dataset observation " + std::to_string(i) + " is not finite");
    }
  }
}

Dataset Dataset::without(std::size_t i) const {
  if (size() < 2 || i >= size()) throw InputError("cannot drop observation from dataset");
  std::vector<double> x, y;
  x.reserve(size() - 1);
  y.reserve(size() - 1);
  for (std::size_t j = 0; j < size(); ++j) {
    if (j == i) continue;
    x.push_back(x_[j]);
    y.push_back(y_[j]);
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> x, y;
  x.reserve(indices.size());
  y.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw InputError("subset index out of range");
    x.push_back(x_[i]);
    y.push_back(y_[i]);
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset Dataset::log_response() const {
  std::vector<double> z(y_.size());
  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (!(y_[i] > 0.0)) throw DomainError("log response needs y > 0 (observation " + std::to_string(i) + ")");
    z[i] = std::log(y_[i]);
  }
  return Dataset(x_, std::move(z));
}

}  // namespace dekreg
