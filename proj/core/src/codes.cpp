#include "wban/codes.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "wban/error.hpp"

namespace wban {

namespace {

// Exhaustive clique search is only attempted at or below this order.
constexpr std::size_t kExhaustiveMaxOrder = 64;
constexpr std::size_t kCliqueNodeBudget = 2'000'000;

std::vector<std::size_t> greedy_rows(const WalshMatrix& m, std::size_t stop_at) {
  std::vector<std::size_t> accepted;
  for (std::size_t r = 0; r < m.order() && accepted.size() < stop_at; ++r) {
    const bool fits = std::all_of(accepted.begin(), accepted.end(), [&](std::size_t a) {
      return cyclic_orthogonal(m.row(a), m.row(r));
    });
    if (fits) accepted.push_back(r);
  }
  return accepted;
}

struct CliqueSearch {
  const std::vector<std::vector<bool>>& compatible;
  std::size_t target;
  std::vector<std::size_t> current;
  std::vector<std::size_t> best;
  std::size_t nodes = 0;

  // Candidates are visited in ascending index so the first set found at a
  // given size is the lexicographically smallest one.
  void run(const std::vector<std::size_t>& candidates) {
    if (best.size() >= target || ++nodes > kCliqueNodeBudget) return;
    if (current.size() > best.size()) best = current;
    if (current.size() + candidates.size() <= best.size()) return;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const std::size_t v = candidates[i];
      std::vector<std::size_t> next;
      for (std::size_t j = i + 1; j < candidates.size(); ++j)
        if (compatible[v][candidates[j]]) next.push_back(candidates[j]);
      current.push_back(v);
      run(next);
      current.pop_back();
      if (best.size() >= target) return;
    }
  }
};

std::vector<std::size_t> exhaustive_rows(const WalshMatrix& m, std::size_t target) {
  const std::size_t n = m.order();
  std::vector<std::vector<bool>> compatible(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      compatible[a][b] = compatible[b][a] = cyclic_orthogonal(m.row(a), m.row(b));
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  CliqueSearch search{compatible, target, {}, {}, 0};
  search.run(all);
  return search.best;
}

std::vector<std::size_t> best_rows(const WalshMatrix& m, std::size_t wanted) {
  auto rows = greedy_rows(m, wanted);
  if (rows.size() < wanted && m.order() <= kExhaustiveMaxOrder) {
    auto alt = exhaustive_rows(m, wanted);
    if (alt.size() > rows.size()) rows = std::move(alt);
  }
  return rows;
}

}  // namespace

WalshMatrix::WalshMatrix(unsigned n, std::vector<Chip> chips)
    : log2_order_(n), order_(std::size_t{1} << n), chips_(std::move(chips)) {}

std::span<const Chip> WalshMatrix::row(std::size_t r) const {
  if (r >= order_) throw ArgumentError("walsh row index out of range");
  return {chips_.data() + r * order_, order_};
}

WalshMatrix generate_walsh(unsigned n) {
  if (n > WalshMatrix::kMaxLog2Order)
    throw ResourceLimitError("walsh order 2^" + std::to_string(n) + " exceeds guard 2^" +
                             std::to_string(WalshMatrix::kMaxLog2Order));
  std::vector<Chip> m{1};
  std::size_t order = 1;
  // M_{2L} = M_2 (x) M_L: top-left, top-right and bottom-left copy M_L,
  // bottom-right negates it.
  for (unsigned step = 0; step < n; ++step) {
    const std::size_t next = order * 2;
    std::vector<Chip> grown(next * next);
    for (std::size_t r = 0; r < order; ++r) {
      for (std::size_t c = 0; c < order; ++c) {
        const Chip v = m[r * order + c];
        grown[r * next + c] = v;
        grown[r * next + c + order] = v;
        grown[(r + order) * next + c] = v;
        grown[(r + order) * next + c + order] = static_cast<Chip>(-v);
      }
    }
    m = std::move(grown);
    order = next;
  }
  return WalshMatrix(n, std::move(m));
}

long periodic_cross_correlation(std::span<const Chip> a, std::span<const Chip> b,
                                std::size_t shift) {
  if (a.size() != b.size()) throw ArgumentError("correlation of codes with unequal lengths");
  const std::size_t len = a.size();
  long sum = 0;
  for (std::size_t t = 0; t < len; ++t) sum += a[t] * b[(t + shift) % len];
  return sum;
}

bool cyclic_orthogonal(std::span<const Chip> a, std::span<const Chip> b) {
  for (std::size_t s = 0; s < a.size(); ++s)
    if (periodic_cross_correlation(a, b, s) != 0) return false;
  return true;
}

CowhcSet extract_cowhc(const WalshMatrix& matrix, std::size_t wanted) {
  if (wanted < 1) throw ArgumentError("extract_cowhc: wanted must be >= 1");
  const auto rows = best_rows(matrix, wanted);
  if (rows.size() < wanted)
    throw CapacityError("order " + std::to_string(matrix.order()) + " supplies only " +
                            std::to_string(rows.size()) + " cyclic-orthogonal codes, " +
                            std::to_string(wanted) + " requested",
                        rows.size());
  CowhcSet set;
  set.matrix_order = matrix.order();
  for (std::size_t r : rows) {
    auto chips = matrix.row(r);
    set.codes.push_back(Code{{chips.begin(), chips.end()}, r});
  }
  return set;
}

std::size_t cowhc_capacity(const WalshMatrix& matrix) {
  return best_rows(matrix, matrix.order()).size();
}

CowhcSet cowhc_for(std::size_t wanted) {
  if (wanted < 1) throw ArgumentError("cowhc_for: wanted must be >= 1");
  // The search is deterministic and costly at larger orders; every simulator
  // run asks for the same few sizes.
  static std::mutex mutex;
  static std::map<std::size_t, CowhcSet> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(wanted); it != cache.end()) return it->second;
  }
  std::size_t best = 0;
  for (unsigned n = 0; n <= WalshMatrix::kMaxLog2Order; ++n) {
    try {
      auto set = extract_cowhc(generate_walsh(n), wanted);
      std::lock_guard lock(mutex);
      return cache.emplace(wanted, std::move(set)).first->second;
    } catch (const CapacityError& e) {
      best = std::max(best, e.max_achievable());
    }
  }
  throw CapacityError("no walsh order up to the resource guard supplies " +
                          std::to_string(wanted) + " codes",
                      best);
}

SpreadSignal spread(std::span<const double> symbols, const Code& code) {
  if (symbols.empty()) throw ArgumentError("spread: empty symbol sequence");
  if (code.length() == 0) throw ArgumentError("spread: empty code");
  SpreadSignal out;
  out.symbols_carried = symbols.size();
  out.code_used = std::make_shared<const Code>(code);
  out.chips.reserve(symbols.size() * code.length());
  for (double s : symbols)
    for (Chip c : code.chips) out.chips.push_back(s * c);
  return out;
}

std::vector<double> despread(std::span<const double> received, const Code& code) {
  const std::size_t len = code.length();
  if (len == 0 || received.size() % len != 0)
    throw ArgumentError("despread: chip count " + std::to_string(received.size()) +
                        " is not a multiple of code length " + std::to_string(len));
  std::vector<double> symbols;
  symbols.reserve(received.size() / len);
  for (std::size_t base = 0; base < received.size(); base += len) {
    double acc = 0.0;
    for (std::size_t t = 0; t < len; ++t) acc += received[base + t] * code.chips[t];
    symbols.push_back(acc / static_cast<double>(len));
  }
  return symbols;
}

}  // namespace wban
