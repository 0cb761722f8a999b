#include "torusvc/extraction.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "torusvc/parallel.hpp"
#include "torusvc/shatter.hpp"

namespace torusvc {

namespace {

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

// Fixed-width column set.
class ColumnSet {
 public:
  explicit ColumnSet(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  ColumnSet operator|(const ColumnSet& o) const {
    ColumnSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] |= o.words_[i];
    return r;
  }

 private:
  std::vector<std::uint64_t> words_;
};

class Matcher {
 public:
  Matcher(const SymbolMatrix& m, std::span<const int> word)
      : m_(m), word_(word), col_owner_(m.cols(), kNone), row_col_(m.rows(), kNone) {}

  // Returns the number of matched rows.
  std::size_t run() {
    std::size_t matched = 0;
    for (std::size_t r = 0; r < m_.rows(); ++r) {
      seen_.assign(m_.cols(), false);
      if (augment(r)) ++matched;
    }
    return matched;
  }

  std::size_t row_col(std::size_t r) const { return row_col_[r]; }
  std::size_t col_owner(std::size_t c) const { return col_owner_[c]; }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

 private:
  bool augment(std::size_t r) {
    for (std::size_t c = 0; c < m_.cols(); ++c) {
      if (m_.at(r, c) != word_[r] || seen_[c]) continue;
      seen_[c] = true;
      if (col_owner_[c] == kNone || augment(col_owner_[c])) {
        col_owner_[c] = r;
        row_col_[r] = c;
        return true;
      }
    }
    return false;
  }

  const SymbolMatrix& m_;
  std::span<const int> word_;
  std::vector<std::size_t> col_owner_;
  std::vector<std::size_t> row_col_;
  std::vector<bool> seen_;
};

// Rows reachable from an unmatched row by alternating paths, and the columns
// they see. Every such column is matched inside the set, so |V| = |U| - 1.
FailureWitness hall_violator(const SymbolMatrix& m, std::span<const int> word, const Matcher& match) {
  std::size_t free_row = Matcher::kNone;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (match.row_col(r) == Matcher::kNone) {
      free_row = r;
      break;
    }
  }
  std::vector<bool> in_u(m.rows(), false);
  std::vector<bool> in_v(m.cols(), false);
  std::vector<std::size_t> queue{free_row};
  in_u[free_row] = true;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::size_t r = queue[qi];
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.at(r, c) != word[r] || in_v[c]) continue;
      in_v[c] = true;
      std::size_t owner = match.col_owner(c);
      if (owner != Matcher::kNone && !in_u[owner]) {
        in_u[owner] = true;
        queue.push_back(owner);
      }
    }
  }
  FailureWitness w;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (in_u[r]) {
      w.rows.push_back(r);
      w.symbols.push_back(word[r]);
    }
  }
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (in_v[c]) w.cols.push_back(c);
  }
  return w;
}

std::vector<int> word_at(std::uint64_t index, std::size_t c, int k) {
  std::vector<int> w(c);
  for (std::size_t r = c; r-- > 0;) {
    w[r] = static_cast<int>(index % static_cast<std::uint64_t>(k));
    index /= static_cast<std::uint64_t>(k);
  }
  return w;
}

ExtractionVerdict check_exhaustive(const SymbolMatrix& m, unsigned jobs) {
  const std::uint64_t total = saturating_pow(static_cast<std::uint64_t>(m.alphabet()), m.rows(), kExhaustiveWordGuard);
  if (total > kExhaustiveWordGuard) {
    throw GuardError("exhaustive extraction check needs k^c <= " + std::to_string(kExhaustiveWordGuard) +
                     " words (k=" + std::to_string(m.alphabet()) + ", c=" + std::to_string(m.rows()) + ")");
  }
  constexpr std::uint64_t kBlock = 1 << 14;
  std::vector<char> bad;
  for (std::uint64_t base = 0; base < total; base += kBlock) {
    const auto count = static_cast<std::size_t>(std::min(kBlock, total - base));
    bad.assign(count, 0);
    parallel_for(count, jobs, [&](std::size_t i) {
      auto w = word_at(base + i, m.rows(), m.alphabet());
      Matcher mt(m, w);
      bad[i] = mt.run() < m.rows() ? 1 : 0;
    });
    for (std::size_t i = 0; i < count; ++i) {
      if (!bad[i]) continue;
      auto w = word_at(base + i, m.rows(), m.alphabet());
      Matcher mt(m, w);
      mt.run();
      ExtractionVerdict v;
      v.holds = false;
      v.failure_witness = hall_violator(m, w, mt);
      v.counterexample_word = std::move(w);
      return v;
    }
  }
  return {true, std::nullopt, std::nullopt};
}

// Depth-first choice of `size` rows and one symbol per row whose supports
// jointly cover at most size-1 columns.
class WitnessSearch {
 public:
  explicit WitnessSearch(const SymbolMatrix& m) : m_(m) {
    support_.resize(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (int s = 0; s < m.alphabet(); ++s) {
        ColumnSet cs(m.cols());
        for (std::size_t c = 0; c < m.cols(); ++c) {
          if (m.at(r, c) == s) cs.set(c);
        }
        support_[r].push_back(cs);
      }
    }
  }

  std::optional<FailureWitness> find() {
    for (std::size_t size = 1; size <= m_.rows(); ++size) {
      size_ = size;
      rows_.clear();
      symbols_.clear();
      if (dfs(0, ColumnSet(m_.cols()))) return build();
    }
    return std::nullopt;
  }

 private:
  bool dfs(std::size_t next_row, const ColumnSet& cover) {
    if (rows_.size() == size_) return true;
    const std::size_t need = size_ - rows_.size();
    for (std::size_t r = next_row; r + need <= m_.rows(); ++r) {
      for (int s = 0; s < m_.alphabet(); ++s) {
        const ColumnSet& sup = support_[r][static_cast<std::size_t>(s)];
        if (sup.count() + 1 > size_) continue;
        ColumnSet merged = cover | sup;
        if (merged.count() + 1 > size_) continue;
        rows_.push_back(r);
        symbols_.push_back(s);
        if (dfs(r + 1, merged)) return true;
        rows_.pop_back();
        symbols_.pop_back();
      }
    }
    return false;
  }

  FailureWitness build() const {
    ColumnSet cover(m_.cols());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      cover = cover | support_[rows_[i]][static_cast<std::size_t>(symbols_[i])];
    }
    FailureWitness w{rows_, {}, symbols_};
    for (std::size_t c = 0; c < m_.cols(); ++c) {
      if (cover.test(c)) w.cols.push_back(c);
    }
    // pad V up to |U| - 1 with the lowest unused columns
    for (std::size_t c = 0; c < m_.cols() && w.cols.size() + 1 < rows_.size(); ++c) {
      if (!cover.test(c)) w.cols.push_back(c);
    }
    std::sort(w.cols.begin(), w.cols.end());
    return w;
  }

  const SymbolMatrix& m_;
  std::vector<std::vector<ColumnSet>> support_;
  std::size_t size_ = 0;
  std::vector<std::size_t> rows_;
  std::vector<int> symbols_;
};

ExtractionVerdict check_witness(const SymbolMatrix& m) {
  const std::uint64_t bound = saturating_pow(static_cast<std::uint64_t>(m.alphabet()) + 1, m.rows(), kWitnessSearchGuard);
  if (bound > kWitnessSearchGuard) {
    throw GuardError("witness extraction check needs (k+1)^c <= " + std::to_string(kWitnessSearchGuard) +
                     " (k=" + std::to_string(m.alphabet()) + ", c=" + std::to_string(m.rows()) + ")");
  }
  WitnessSearch search(m);
  if (auto w = search.find()) return {false, std::nullopt, std::move(w)};
  return {true, std::nullopt, std::nullopt};
}

std::uint64_t integral_qm(const Rat& q, std::uint64_t m) {
  Rat qm = q * Rat(static_cast<std::int64_t>(m));
  if (!qm.is_integer() || qm.num() <= 0) {
    throw std::invalid_argument("q*m must be a positive integer, got " + qm.str());
  }
  return static_cast<std::uint64_t>(qm.num());
}

}  // namespace

SymbolMatrix::SymbolMatrix(std::size_t rows, std::size_t cols, int alphabet)
    : SymbolMatrix(rows, cols, alphabet, std::vector<int>(rows * cols, 0)) {}

SymbolMatrix::SymbolMatrix(std::size_t rows, std::size_t cols, int alphabet, std::vector<int> entries)
    : rows_(rows), cols_(cols), k_(alphabet), entries_(std::move(entries)) {
  if (k_ < 1) throw std::invalid_argument("alphabet size must be at least 1");
  if (entries_.size() != rows_ * cols_) throw std::invalid_argument("entry count does not match shape");
  for (int e : entries_) {
    if (e < 0 || e >= k_) throw std::invalid_argument("symbol " + std::to_string(e) + " outside alphabet");
  }
}

SymbolMatrix SymbolMatrix::from_rows(int alphabet, const std::vector<std::vector<int>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<int> entries;
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("ragged matrix rows");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return SymbolMatrix(rows.size(), cols, alphabet, std::move(entries));
}

void SymbolMatrix::set(std::size_t r, std::size_t c, int symbol) {
  if (symbol < 0 || symbol >= k_) throw std::invalid_argument("symbol outside alphabet");
  entries_.at(r * cols_ + c) = symbol;
}

bool SymbolMatrix::balanced(std::size_t per_symbol) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(k_), 0);
    for (int e : row(r)) ++counts[static_cast<std::size_t>(e)];
    for (auto c : counts) {
      if (c != per_symbol) return false;
    }
  }
  return true;
}

SymbolMatrix SymbolMatrix::without_column(std::size_t c) const {
  if (c >= cols_) throw std::out_of_range("column index out of range");
  std::vector<int> e;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j != c) e.push_back(at(r, j));
    }
  }
  return SymbolMatrix(rows_, cols_ - 1, k_, std::move(e));
}

SymbolMatrix SymbolMatrix::with_column(std::span<const int> column) const {
  if (column.size() != rows_) throw std::invalid_argument("column height does not match");
  std::vector<int> e;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < cols_; ++j) e.push_back(at(r, j));
    e.push_back(column[r]);
  }
  return SymbolMatrix(rows_, cols_ + 1, k_, std::move(e));
}

SymbolMatrix superdiagonal_matrix(std::size_t c) {
  if (c == 0) throw std::invalid_argument("superdiagonal matrix needs c >= 1");
  SymbolMatrix m(c, c + 1, 2);
  for (std::size_t i = 0; i < c; ++i) m.set(i, i + 1, 1);
  return m;
}

std::optional<std::vector<std::size_t>> extract_columns(const SymbolMatrix& m, std::span<const int> word) {
  if (word.size() != m.rows()) throw std::invalid_argument("word length differs from row count");
  Matcher mt(m, word);
  if (mt.run() < m.rows()) return std::nullopt;
  std::vector<std::size_t> cols(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) cols[r] = mt.row_col(r);
  return cols;
}

ExtractionVerdict check_extraction(const SymbolMatrix& m, ExtractionMode mode, unsigned jobs) {
  return mode == ExtractionMode::exhaustive ? check_exhaustive(m, jobs) : check_witness(m);
}

bool failure_witness_valid(const SymbolMatrix& m, const FailureWitness& w) {
  if (w.rows.empty() || w.symbols.size() != w.rows.size()) return false;
  if (w.cols.size() + 1 != w.rows.size()) return false;
  std::vector<bool> in_v(m.cols(), false);
  for (std::size_t c : w.cols) {
    if (c >= m.cols() || in_v[c]) return false;
    in_v[c] = true;
  }
  std::vector<bool> in_u(m.rows(), false);
  for (std::size_t i = 0; i < w.rows.size(); ++i) {
    std::size_t r = w.rows[i];
    if (r >= m.rows() || in_u[r]) return false;
    in_u[r] = true;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.at(r, c) == w.symbols[i] && !in_v[c]) return false;
    }
  }
  return true;
}

SymbolMatrix random_balanced_matrix(std::size_t m, std::size_t k, Rat q, Rng& rng) {
  if (m == 0 || k == 0) throw std::invalid_argument("m and k must be positive");
  const std::uint64_t qm = integral_qm(q, m);
  const std::size_t c = m * k;
  const std::size_t d = static_cast<std::size_t>(qm) * k;
  std::vector<int> base;
  base.reserve(d);
  for (std::size_t s = 0; s < k; ++s) base.insert(base.end(), static_cast<std::size_t>(qm), static_cast<int>(s));
  std::vector<int> entries;
  entries.reserve(c * d);
  for (std::size_t r = 0; r < c; ++r) {
    std::vector<int> w = base;
    for (std::size_t i = d; i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(rng.below(i));
      std::swap(w[i - 1], w[j]);
    }
    entries.insert(entries.end(), w.begin(), w.end());
  }
  return SymbolMatrix(c, d, static_cast<int>(k), std::move(entries));
}

SymbolMatrix random_balanced_matrix(std::size_t m, std::size_t k, Rat q, std::uint64_t seed) {
  Rng rng(seed);
  return random_balanced_matrix(m, k, q, rng);
}

SampleResult sample_extraction_matrix(std::size_t m, std::size_t k, Rat q, std::size_t max_trials,
                                      std::uint64_t seed) {
  if (m == 0 || k == 0) throw std::invalid_argument("m and k must be positive");
  integral_qm(q, m);
  const std::uint64_t bound = saturating_pow(k + 1, m * k, kWitnessSearchGuard);
  if (bound > kWitnessSearchGuard) {
    throw GuardError("sampling needs (k+1)^c <= " + std::to_string(kWitnessSearchGuard) + " for witness checks");
  }
  Rng rng(seed);
  SampleResult out;
  for (std::size_t t = 1; t <= max_trials; ++t) {
    SymbolMatrix cand = random_balanced_matrix(m, k, q, rng);
    out.trials_used = t;
    if (check_extraction(cand, ExtractionMode::witness).holds) {
      out.matrix = std::move(cand);
      return out;
    }
  }
  return out;
}

CountingLedger failure_probability_bound(Rat q, std::uint64_t m, std::uint64_t k) {
  if (m == 0 || k == 0) throw std::invalid_argument("m and k must be positive");
  CountingLedger L;
  L.q = q;
  L.m = m;
  L.k = k;
  L.qm = integral_qm(q, m);
  L.c = m * k;
  L.d = L.qm * k;

  const BigInt fqm = factorial(L.qm);
  L.A = factorial(L.d) / ipow(fqm, k);
  L.T = ipow(L.A, L.c);
  // Balanced words of the other k-1 symbols on the remaining d - qm positions.
  const BigInt rest = factorial(L.d - L.qm) / ipow(fqm, k - 1);
  L.B = 0;
  for (std::uint64_t i = 1; i <= L.c; ++i) {
    BigInt f = BigInt(k) * binomial(i - 1, L.qm) * rest;
    BigInt h = binomial(L.c, i) * binomial(L.d, i - 1) * ipow(f, i) * ipow(L.A, L.c - i);
    L.B += h;
    L.F.push_back(std::move(f));
    L.H.push_back(std::move(h));
  }
  L.ratio = BigRat(L.B, L.T);
  return L;
}

bool verify_ext_req(Rat q, std::uint64_t m, std::uint64_t k) {
  if (m == 0 || k == 0) throw std::invalid_argument("m and k must be positive");
  const std::uint64_t qm = integral_qm(q, m);
  const BigRat bq = to_big(q);
  const BigRat lhs = ipow(bq - bq / BigRat(k), qm);
  const BigRat rhs = bq * BigRat(m) * BigRat(m) * BigRat(k) * BigRat(k) * BigRat(k);
  return lhs > rhs;
}

}  // namespace torusvc
