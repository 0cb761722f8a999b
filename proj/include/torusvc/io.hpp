#pragma once

// Text formats for point sets, symbol matrices and witness certificates.
//
// points:       "d n D" then n lines of d ticks t in [0, D); coordinate t/D
// matrix:       "c d k" then c lines of d symbols in [0, k)
// certificate:  "d n D kind" with kind box|cube|stripe, then one line per mask
//               mask=<hex> shape=<fields>, every number a numerator over D:
//                 box     s_1 .. s_d ; len_1 .. len_d
//                 cube    s_1 .. s_d ; edge
//                 stripe  axis start ; length        (axis 0-based, open arc)
// Numbers are base-10, fields separated by single spaces, lines end in '\n'.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "torusvc/extraction.hpp"
#include "torusvc/shatter.hpp"

namespace torusvc {

/// Malformed input; the message starts with "line N: ".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

void write_points(std::ostream& out, const PointSet& ps);
PointSet read_points(std::istream& in);

void write_matrix(std::ostream& out, const SymbolMatrix& m);
SymbolMatrix read_matrix(std::istream& in);

enum class ShapeKind { box, cube, stripe };
const char* shape_kind_name(ShapeKind k);

struct Certificate {
  std::size_t dim = 0;
  std::size_t points = 0;
  std::int64_t denom = 1;
  ShapeKind kind = ShapeKind::box;
  std::vector<std::pair<Mask, Shape>> entries;
};

/// Picks the least denominator covering the points and every shape; all
/// shapes must share one kind.
Certificate make_certificate(const PointSet& ps, const std::vector<std::pair<Mask, Shape>>& entries);
void write_certificate(std::ostream& out, const Certificate& cert);
Certificate read_certificate(std::istream& in);

struct CertificateCheck {
  std::vector<Mask> failures;   // masks whose shape cuts out a different subset, in file order
  std::size_t distinct_masks = 0;
  bool complete = false;        // every one of the 2^n masks is present

  bool passed() const { return failures.empty(); }
};

/// Re-checks every entry with plain containment tests against `ps`.
/// Throws DimensionError when the header does not match the points.
CertificateCheck verify_certificate(const PointSet& ps, const Certificate& cert);

std::string mask_hex(Mask m);

}  // namespace torusvc
