#pragma once

// Matrices with the k-extraction property: every word b of length c over k
// symbols can be read off in pairwise distinct columns j_i with M[i][j_i] = b_i.
//
// Symbols are the integers 0..k-1. Row, column and word indices are 0-based.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "torusvc/bigint.hpp"
#include "torusvc/random.hpp"
#include "torusvc/rational.hpp"

namespace torusvc {

class SymbolMatrix {
 public:
  SymbolMatrix(std::size_t rows, std::size_t cols, int alphabet);
  SymbolMatrix(std::size_t rows, std::size_t cols, int alphabet, std::vector<int> entries);
  static SymbolMatrix from_rows(int alphabet, const std::vector<std::vector<int>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int alphabet() const { return k_; }

  int at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, int symbol);
  std::span<const int> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }

  /// Every symbol occurs exactly `per_symbol` times in every row.
  bool balanced(std::size_t per_symbol) const;

  SymbolMatrix without_column(std::size_t c) const;
  SymbolMatrix with_column(std::span<const int> column) const;

  friend bool operator==(const SymbolMatrix&, const SymbolMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  int k_;
  std::vector<int> entries_;
};

/// Rows U, columns V with |V| = |U|-1, and for each row of U a symbol all of
/// whose occurrences in that row fall inside V.
struct FailureWitness {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<int> symbols;  // parallel to rows
};

struct ExtractionVerdict {
  bool holds = false;
  std::optional<std::vector<int>> counterexample_word;
  std::optional<FailureWitness> failure_witness;
};

enum class ExtractionMode { exhaustive, witness };

inline constexpr std::uint64_t kExhaustiveWordGuard = 10'000'000;     // k^c
inline constexpr std::uint64_t kWitnessSearchGuard = 100'000'000;     // (k+1)^c

/// c x (c+1) matrix over {0,1} with symbol 1 exactly at (i, i+1).
SymbolMatrix superdiagonal_matrix(std::size_t c);

/// Distinct columns reading `word` off `m`, found by augmenting paths that try
/// lower columns first; nullopt if no complete assignment exists.
std::optional<std::vector<std::size_t>> extract_columns(const SymbolMatrix& m, std::span<const int> word);

/// Exhaustive mode reports the first failing word in lexicographic order (row 0
/// most significant) together with the Hall violator its matching exposes.
/// Witness mode searches row sets by increasing size. Throws GuardError when
/// the mode's size guard is exceeded.
ExtractionVerdict check_extraction(const SymbolMatrix& m, ExtractionMode mode, unsigned jobs = 1);

/// Independent re-check of a failure witness against its defining condition.
bool failure_witness_valid(const SymbolMatrix& m, const FailureWitness& w);

/// Each of the m*k rows is an independent uniformly shuffled balanced word of
/// length q*m*k. Throws std::invalid_argument unless q*m is a positive integer.
SymbolMatrix random_balanced_matrix(std::size_t m, std::size_t k, Rat q, std::uint64_t seed);
SymbolMatrix random_balanced_matrix(std::size_t m, std::size_t k, Rat q, Rng& rng);

struct SampleResult {
  std::optional<SymbolMatrix> matrix;  // empty when the trials ran out
  std::size_t trials_used = 0;
};

/// Rejection sampling of balanced matrices until one passes witness-mode checking.
SampleResult sample_extraction_matrix(std::size_t m, std::size_t k, Rat q, std::size_t max_trials,
                                      std::uint64_t seed);

struct CountingLedger {
  Rat q;
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  std::uint64_t c = 0;
  std::uint64_t d = 0;
  std::uint64_t qm = 0;
  BigInt A;                    // balanced words of length d
  BigInt T;                    // balanced c x d matrices
  std::vector<BigInt> F;       // F[i-1] bounds words with a symbol confined to i-1 given positions
  std::vector<BigInt> H;       // H[i-1] bounds matrices failing with |U| = i
  BigInt B;                    // sum of H
  BigRat ratio;                // B / T
};

/// Exact counting bound on the fraction of balanced matrices failing the
/// property. Requires q*m integral.
CountingLedger failure_probability_bound(Rat q, std::uint64_t m, std::uint64_t k);

/// (q - q/k)^(q m) > q m^2 k^3, compared exactly.
bool verify_ext_req(Rat q, std::uint64_t m, std::uint64_t k);

}  // namespace torusvc
