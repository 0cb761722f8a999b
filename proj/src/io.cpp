#include "torusvc/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

namespace torusvc {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line; false at end of input.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }
  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t to_int(std::string_view tok, std::size_t line, int base = 10) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, base);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::int64_t> int_line(std::string_view line, std::size_t expected, std::size_t number, const char* what) {
  auto toks = split(line);
  if (toks.size() != expected) {
    throw ParseError(number, std::string(what) + ": expected " + std::to_string(expected) + " integers, got " +
                                 std::to_string(toks.size()));
  }
  std::vector<std::int64_t> out;
  for (auto t : toks) out.push_back(to_int(t, number));
  return out;
}

void expect_end(LineReader& r, const char* what) {
  std::string line;
  if (r.next(line)) throw ParseError(r.number(), std::string("unexpected content after the last ") + what);
}

std::int64_t over(const Rat& x, std::int64_t denom) { return (x * Rat(denom)).num(); }

std::int64_t shape_denom(const Shape& s) {
  std::int64_t D = 1;
  auto arcs = [&](const std::vector<Arc>& as) {
    for (const Arc& a : as) {
      D = checked_lcm(D, a.start().den());
      D = checked_lcm(D, arc_length(a).den());
    }
  };
  if (const auto* b = std::get_if<Box>(&s)) arcs(b->arcs());
  if (const auto* c = std::get_if<Cube>(&s)) {
    arcs(c->arcs());
    D = checked_lcm(D, c->edge().den());
  }
  if (const auto* st = std::get_if<Stripe>(&s)) arcs({st->arc()});
  return D;
}

ShapeKind kind_of(const Shape& s) {
  if (std::holds_alternative<Box>(s)) return ShapeKind::box;
  if (std::holds_alternative<Cube>(s)) return ShapeKind::cube;
  return ShapeKind::stripe;
}

Shape parse_shape(std::string_view body, const Certificate& c, std::size_t number) {
  auto toks = split(body);
  std::vector<std::int64_t> left, right;
  bool seen_semi = false;
  for (auto t : toks) {
    if (t == ";") {
      if (seen_semi) throw ParseError(number, "shape has more than one ';'");
      seen_semi = true;
      continue;
    }
    (seen_semi ? right : left).push_back(to_int(t, number));
  }
  if (!seen_semi) throw ParseError(number, "shape is missing ';'");
  const std::size_t d = c.dim;
  const std::int64_t D = c.denom;
  auto need = [&](std::size_t l, std::size_t r) {
    if (left.size() != l || right.size() != r) {
      throw ParseError(number, std::string(shape_kind_name(c.kind)) + " shape needs " + std::to_string(l) + " ; " +
                                   std::to_string(r) + " numbers");
    }
  };
  try {
    switch (c.kind) {
      case ShapeKind::box: {
        need(d, d);
        std::vector<Arc> arcs;
        for (std::size_t i = 0; i < d; ++i) {
          arcs.push_back(Arc::with_length(Rat(left[i], D), Rat(right[i], D), Closure::closed));
        }
        return Box(std::move(arcs));
      }
      case ShapeKind::cube: {
        need(d, 1);
        std::vector<Rat> starts;
        for (auto v : left) starts.emplace_back(v, D);
        return Cube::at(starts, Rat(right[0], D));
      }
      case ShapeKind::stripe: {
        need(2, 1);
        if (left[0] < 0) throw std::invalid_argument("negative stripe axis");
        return Stripe(static_cast<std::size_t>(left[0]),
                      Arc::with_length(Rat(left[1], D), Rat(right[0], D), Closure::open), d);
      }
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(number, std::string("invalid shape: ") + e.what());
  }
  throw ParseError(number, "unknown shape kind");
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string mask_hex(Mask m) {
  std::ostringstream s;
  s << std::hex << m;
  return s.str();
}

const char* shape_kind_name(ShapeKind k) {
  switch (k) {
    case ShapeKind::box:
      return "box";
    case ShapeKind::cube:
      return "cube";
    case ShapeKind::stripe:
      return "stripe";
  }
  return "?";
}

void write_points(std::ostream& out, const PointSet& ps) {
  out << ps.dim() << ' ' << ps.size() << ' ' << ps.denom() << '\n';
  for (std::size_t p = 0; p < ps.size(); ++p) {
    for (std::size_t a = 0; a < ps.dim(); ++a) out << (a ? " " : "") << ps.tick(p, a);
    out << '\n';
  }
}

PointSet read_points(std::istream& in) {
  LineReader r(in);
  std::string line;
  if (!r.next(line)) throw ParseError(r.number() + 1, "missing header 'd n D'");
  auto h = int_line(line, 3, r.number(), "header 'd n D'");
  if (h[0] < 1) throw ParseError(r.number(), "dimension must be positive");
  if (h[1] < 0) throw ParseError(r.number(), "point count must be non-negative");
  if (h[2] < 1) throw ParseError(r.number(), "denominator must be positive");
  PointSet ps(static_cast<std::size_t>(h[0]), h[2]);
  for (std::int64_t p = 0; p < h[1]; ++p) {
    if (!r.next(line)) throw ParseError(r.number() + 1, "expected " + std::to_string(h[1]) + " points, got " + std::to_string(p));
    auto row = int_line(line, ps.dim(), r.number(), "point");
    for (auto t : row) {
      if (t < 0 || t >= h[2]) throw ParseError(r.number(), "tick " + std::to_string(t) + " outside [0, D)");
    }
    ps.add(row);
  }
  expect_end(r, "point");
  return ps;
}

void write_matrix(std::ostream& out, const SymbolMatrix& m) {
  out << m.rows() << ' ' << m.cols() << ' ' << m.alphabet() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m.at(i, j);
    out << '\n';
  }
}

SymbolMatrix read_matrix(std::istream& in) {
  LineReader r(in);
  std::string line;
  if (!r.next(line)) throw ParseError(r.number() + 1, "missing header 'c d k'");
  auto h = int_line(line, 3, r.number(), "header 'c d k'");
  if (h[0] < 1 || h[1] < 1 || h[2] < 1) throw ParseError(r.number(), "c, d and k must be positive");
  if (h[2] > 1'000'000) throw ParseError(r.number(), "alphabet too large");
  SymbolMatrix m(static_cast<std::size_t>(h[0]), static_cast<std::size_t>(h[1]), static_cast<int>(h[2]));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!r.next(line)) throw ParseError(r.number() + 1, "expected " + std::to_string(m.rows()) + " rows");
    auto row = int_line(line, m.cols(), r.number(), "row");
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (row[j] < 0 || row[j] >= h[2]) throw ParseError(r.number(), "symbol " + std::to_string(row[j]) + " outside [0, k)");
      m.set(i, j, static_cast<int>(row[j]));
    }
  }
  expect_end(r, "row");
  return m;
}

Certificate make_certificate(const PointSet& ps, const std::vector<std::pair<Mask, Shape>>& entries) {
  Certificate c;
  c.dim = ps.dim();
  c.points = ps.size();
  c.denom = ps.denom();
  if (!entries.empty()) c.kind = kind_of(entries.front().second);
  for (const auto& [mask, shape] : entries) {
    if (kind_of(shape) != c.kind) throw std::invalid_argument("certificate shapes must share one kind");
    c.denom = checked_lcm(c.denom, shape_denom(shape));
  }
  c.entries = entries;
  return c;
}

void write_certificate(std::ostream& out, const Certificate& c) {
  const std::int64_t D = c.denom;
  out << c.dim << ' ' << c.points << ' ' << D << ' ' << shape_kind_name(c.kind) << '\n';
  for (const auto& [mask, shape] : c.entries) {
    out << "mask=" << mask_hex(mask) << " shape=";
    if (const auto* b = std::get_if<Box>(&shape)) {
      for (const Arc& a : b->arcs()) out << over(a.start(), D) << ' ';
      out << ';';
      for (const Arc& a : b->arcs()) out << ' ' << over(arc_length(a), D);
    } else if (const auto* cu = std::get_if<Cube>(&shape)) {
      for (const Arc& a : cu->arcs()) out << over(a.start(), D) << ' ';
      out << "; " << over(cu->edge(), D);
    } else {
      const auto& s = std::get<Stripe>(shape);
      out << s.anchor() << ' ' << over(s.arc().start(), D) << " ; " << over(s.length(), D);
    }
    out << '\n';
  }
}

Certificate read_certificate(std::istream& in) {
  LineReader r(in);
  std::string line;
  if (!r.next(line)) throw ParseError(r.number() + 1, "missing header 'd n D kind'");
  auto toks = split(line);
  if (toks.size() != 4) throw ParseError(r.number(), "header 'd n D kind' needs 4 fields");
  Certificate c;
  const auto d = to_int(toks[0], r.number());
  const auto n = to_int(toks[1], r.number());
  c.denom = to_int(toks[2], r.number());
  if (d < 1 || n < 0 || n > 64 || c.denom < 1) throw ParseError(r.number(), "header values out of range");
  c.dim = static_cast<std::size_t>(d);
  c.points = static_cast<std::size_t>(n);
  if (toks[3] == "box") {
    c.kind = ShapeKind::box;
  } else if (toks[3] == "cube") {
    c.kind = ShapeKind::cube;
  } else if (toks[3] == "stripe") {
    c.kind = ShapeKind::stripe;
  } else {
    throw ParseError(r.number(), "unknown shape kind '" + std::string(toks[3]) + "'");
  }
  while (r.next(line)) {
    std::string_view v(line);
    v.remove_prefix(std::min(v.find_first_not_of(" \t"), v.size()));
    if (!v.starts_with("mask=")) throw ParseError(r.number(), "expected 'mask=<hex>'");
    v.remove_prefix(5);
    const std::size_t sp = v.find(' ');
    if (sp == std::string_view::npos) throw ParseError(r.number(), "missing 'shape='");
    std::string_view hex = v.substr(0, sp);
    std::uint64_t mask = 0;
    auto [p, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), mask, 16);
    if (ec != std::errc() || p != hex.data() + hex.size()) throw ParseError(r.number(), "bad mask '" + std::string(hex) + "'");
    if ((mask & ~full_mask(c.points)) != 0) throw ParseError(r.number(), "mask names a point beyond n");
    v.remove_prefix(sp);
    v.remove_prefix(std::min(v.find_first_not_of(" \t"), v.size()));
    if (!v.starts_with("shape=")) throw ParseError(r.number(), "expected 'shape='");
    v.remove_prefix(6);
    c.entries.emplace_back(mask, parse_shape(v, c, r.number()));
  }
  return c;
}

CertificateCheck verify_certificate(const PointSet& ps, const Certificate& cert) {
  if (cert.dim != ps.dim() || cert.points != ps.size()) {
    throw DimensionError("certificate header (d=" + std::to_string(cert.dim) + ", n=" + std::to_string(cert.points) +
                         ") does not match the points (d=" + std::to_string(ps.dim()) +
                         ", n=" + std::to_string(ps.size()) + ")");
  }
  CertificateCheck out;
  std::set<Mask> seen;
  for (const auto& [mask, shape] : cert.entries) {
    if (shape_trace(shape, ps) != mask) out.failures.push_back(mask);
    seen.insert(mask);
  }
  out.distinct_masks = seen.size();
  out.complete = ps.size() < 64 && seen.size() == (std::size_t{1} << ps.size());
  return out;
}

}  // namespace torusvc
