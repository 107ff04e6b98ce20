#include "lyapdisc/cocycle.hpp"

#include "lyapdisc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace lyapdisc {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::S: return "S";
    case Family::D: return "D";
    case Family::R: return "R";
    case Family::Explicit: return "explicit";
    case Family::Product: return "product";
  }
  return "unknown";
}

Matrix2 make_generator(const GeneratorSpec& spec) {
  const double l = spec.param;
  switch (spec.family) {
    case Family::S:
      return {l, -1.0, 1.0, 0.0};
    case Family::D:
      if (l == 0.0) throw Error(ErrorCode::BadParam, "D_lambda needs lambda != 0");
      return {l, 0.0, 0.0, 1.0 / l};
    case Family::R:
      return rotation(l);
    case Family::Explicit:
      if (!spec.matrix) throw Error(ErrorCode::BadParam, "explicit generator without a matrix");
      return *spec.matrix;
    case Family::Product: {
      if (spec.factors.empty()) throw Error(ErrorCode::BadParam, "product generator without factors");
      Matrix2 m = Matrix2::identity();
      for (const auto& f : spec.factors) m = m * make_generator(f);
      return m;
    }
  }
  throw Error(ErrorCode::BadParam, "unknown generator family");
}

Cocycle::Cocycle(std::vector<Matrix2> mats, std::vector<double> probs)
    : Cocycle(std::move(mats), std::move(probs), 1e-12, std::nullopt) {}

Cocycle::Cocycle(std::vector<Matrix2> mats, std::vector<double> probs, double prob_tolerance,
                 std::optional<bool> sl2)
    : mats_(std::move(mats)), probs_(std::move(probs)) {
  if (mats_.empty()) throw Error(ErrorCode::InvalidArgument, "cocycle needs at least one matrix");
  if (mats_.size() != probs_.size()) {
    throw Error(ErrorCode::InvalidArgument, "matrix and probability counts differ");
  }
  for (double p : probs_) {
    if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "probabilities must be strictly positive");
  }
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > prob_tolerance) {
    std::ostringstream os;
    os << "probabilities sum to " << total << ", expected 1";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  // Products of invertible factors are invertible, whatever their computed
  // determinant says.
  if (sl2) {
    sl2_ = *sl2;
    return;
  }
  for (std::size_t j = 0; j < mats_.size(); ++j) {
    if (!mats_[j].is_invertible()) {
      std::ostringstream os;
      os << "matrix " << j << " is not invertible (det = " << mats_[j].det() << ")";
      throw Error(ErrorCode::NonInvertible, os.str());
    }
  }
  sl2_ = std::all_of(mats_.begin(), mats_.end(), [](const Matrix2& m) { return m.is_sl2(); });
}

Cocycle Cocycle::uniform(std::vector<Matrix2> mats) {
  const std::size_t k = mats.size();
  return Cocycle(std::move(mats), std::vector<double>(k, k ? 1.0 / static_cast<double>(k) : 0.0));
}

void Cocycle::require_sl2() const {
  if (!sl2_) throw Error(ErrorCode::NotSl2, "operation requires an SL(2, R) cocycle");
}

std::uint64_t word_count(std::size_t k, int n) {
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / k) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= k;
  }
  return total;
}

Cocycle iterate_cocycle(const Cocycle& c, int n, std::uint64_t word_cap) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "iteration count must be positive");
  const std::size_t k = c.size();
  const std::uint64_t words = word_count(k, n);
  if (words > word_cap) throw CapExceededError(words, word_cap);
  if (n == 1) return c;

  // Breadth-first over word length: extending every word of length m by each
  // letter keeps lexicographic order with x_0 varying slowest.
  std::vector<Matrix2> mats = c.mats();
  std::vector<double> probs = c.probs();
  for (int level = 1; level < n; ++level) {
    std::vector<Matrix2> next_mats;
    std::vector<double> next_probs;
    next_mats.reserve(mats.size() * k);
    next_probs.reserve(mats.size() * k);
    for (std::size_t w = 0; w < mats.size(); ++w) {
      for (std::size_t j = 0; j < k; ++j) {
        next_mats.push_back(c.matrix(j) * mats[w]);
        next_probs.push_back(probs[w] * c.prob(j));
      }
    }
    mats = std::move(next_mats);
    probs = std::move(next_probs);
  }
  // Products of probabilities drift from 1 by rounding only.
  return Cocycle(std::move(mats), std::move(probs), 1e-9, c.is_sl2());
}

double max_norm(const Cocycle& c) {
  double best = 0.0;
  for (const auto& m : c.mats()) best = std::max(best, m.operator_norm());
  return best;
}

}  // namespace lyapdisc
