// Walsh-Hadamard matrices, cyclic-orthogonal code subsets, and chip-level
// spreading/despreading.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace wban {

using Chip = std::int8_t;  // always +1 or -1

/// Square +-1 matrix of order 2^n built by the Sylvester/Kronecker recursion.
class WalshMatrix {
 public:
  static constexpr unsigned kMaxLog2Order = 16;

  std::size_t order() const noexcept { return order_; }
  unsigned log2_order() const noexcept { return log2_order_; }

  std::span<const Chip> row(std::size_t r) const;
  Chip at(std::size_t r, std::size_t c) const { return chips_[r * order_ + c]; }

  friend WalshMatrix generate_walsh(unsigned n);

 private:
  WalshMatrix(unsigned n, std::vector<Chip> chips);

  unsigned log2_order_ = 0;
  std::size_t order_ = 1;
  std::vector<Chip> chips_;
};

/// One spreading sequence; a row of some WalshMatrix.
struct Code {
  std::vector<Chip> chips;
  std::size_t source_row = 0;

  std::size_t length() const noexcept { return chips.size(); }
  bool operator==(const Code&) const = default;
};

struct CowhcSet {
  std::vector<Code> codes;
  std::size_t matrix_order = 1;

  std::size_t set_size() const noexcept { return codes.size(); }
  bool operator==(const CowhcSet&) const = default;
};

struct SpreadSignal {
  std::vector<double> chips;
  std::size_t symbols_carried = 0;
  std::shared_ptr<const Code> code_used;
};

/// M_{2^n}; throws ResourceLimitError when n > kMaxLog2Order.
WalshMatrix generate_walsh(unsigned n);

/// Sum_t a[t] * b[(t + shift) mod L]. Both codes must have equal length.
long periodic_cross_correlation(std::span<const Chip> a, std::span<const Chip> b,
                                std::size_t shift);

/// True when the periodic cross-correlation vanishes at every cyclic shift.
bool cyclic_orthogonal(std::span<const Chip> a, std::span<const Chip> b);

/// Lowest-index-first greedy selection of rows that are pairwise cyclic
/// orthogonal, with an exhaustive clique search fallback for small orders.
/// Returns exactly `wanted` codes; throws CapacityError carrying the largest
/// achievable set size when the matrix cannot supply them.
CowhcSet extract_cowhc(const WalshMatrix& matrix, std::size_t wanted);

/// Size of the largest cyclic-orthogonal row subset found for this matrix.
std::size_t cowhc_capacity(const WalshMatrix& matrix);

/// Smallest Walsh order whose COWHC capacity reaches `wanted`.
CowhcSet cowhc_for(std::size_t wanted);

SpreadSignal spread(std::span<const double> symbols, const Code& code);

/// Per symbol window, (1/L) * Sum_t received[t] * code[t].
std::vector<double> despread(std::span<const double> received, const Code& code);

}  // namespace wban
