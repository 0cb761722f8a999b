#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "torusvc/cli.hpp"
#include "torusvc/io.hpp"
#include "torusvc/lifting.hpp"
#include "torusvc/stripes.hpp"

using namespace torusvc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("torusvc_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_CASE("points round trip") {
  PointSet ps = build_stripe_shattered_set(2, Rat(1, 2));
  std::ostringstream o;
  write_points(o, ps);
  CHECK(o.str() == "4 3 6\n5 5 5 5\n5 1 5 1\n5 5 1 1\n");
  std::istringstream i(o.str());
  PointSet back = read_points(i);
  CHECK(back.size() == 3);
  for (std::size_t p = 0; p < 3; ++p) CHECK(back.point(p) == ps.point(p));
}

TEST_CASE("matrix round trip") {
  SymbolMatrix m = superdiagonal_matrix(4);
  std::ostringstream o;
  write_matrix(o, m);
  std::istringstream i(o.str());
  CHECK(read_matrix(i) == m);
}

TEST_CASE("parse errors carry line numbers") {
  auto points_error = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_points(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(points_error("2 2 4\n0 1\n0 4\n") == 3);
  CHECK(points_error("2 2 4\n0 1\n") == 3);
  CHECK(points_error("2 x 4\n") == 1);
  CHECK(points_error("2 1 4\n0 1 2\n") == 2);
  std::istringstream bad("2 2 2\n0 1\n0 2\n");
  try {
    read_matrix(bad);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).rfind("line 3: ", 0) == 0);
  }
}

TEST_CASE("certificates round trip and catch tampering") {
  LiftInstance inst = lift_points(build_stripe_shattered_set(1, Rat(1, 2)), superdiagonal_matrix(2), Rat(1, 2));
  REQUIRE(inst.lifted.dim() == 3);
  LiftReport rep = verify_lift(inst, LiftCheck::all(), 1, true);
  REQUIRE(rep.passed());
  std::vector<std::pair<Mask, Shape>> entries;
  for (const auto& [mask, cube] : rep.witnesses) entries.emplace_back(mask, Shape{cube});
  Certificate cert = make_certificate(inst.lifted, entries);
  CHECK(cert.kind == ShapeKind::cube);
  std::ostringstream o;
  write_certificate(o, cert);
  std::istringstream i(o.str());
  Certificate back = read_certificate(i);
  std::ostringstream o2;
  write_certificate(o2, back);
  CHECK(o2.str() == o.str());
  auto check = verify_certificate(inst.lifted, back);
  CHECK(check.passed());
  CHECK(check.complete);
  CHECK(check.distinct_masks == 16);
}

TEST_CASE("cli: stripe build, shatter, verify, tamper") {
  const fs::path pts = scratch() / "x.pts", cert = scratch() / "x.cert";
  CHECK(cli({"stripes-build", "--n", "2", "--l", "1/2", "-o", pts.string()}).code == kExitOk);
  auto sh = cli({"shatter", pts.string(), "--family", "stripes", "--l", "1/2", "-o", cert.string()});
  CHECK(sh.code == kExitOk);
  auto ok = cli({"verify-cert", pts.string(), cert.string()});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("complete") != std::string::npos);

  // shift the start of the mask=3 stripe by one tick
  std::string text = slurp(cert);
  const auto at = text.find("mask=3 ");
  REQUIRE(at != std::string::npos);
  const auto sp = text.find("shape=", at) + 6;
  const auto start = text.find(' ', sp) + 1;
  const auto end = text.find(' ', start);
  const long v = std::stol(text.substr(start, end - start));
  text.replace(start, end - start, std::to_string(v + 3));
  spit(cert, text);
  auto bad = cli({"verify-cert", pts.string(), cert.string()});
  CHECK(bad.code == kExitProperty);
  CHECK(bad.out.find("mask=3") != std::string::npos);

  CHECK(cli({"shatter", pts.string(), "--family", "cubes"}).code == kExitOk);
  const fs::path dup = scratch() / "dup.pts";
  spit(dup, "2 2 4\n1 3\n1 3\n");
  auto d = cli({"shatter", dup.string(), "--family", "boxes"});
  CHECK(d.code == kExitProperty);
}

TEST_CASE("cli: exit codes") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"bogus"}).code == kExitUsage);
  CHECK(cli({"shatter", (scratch() / "missing.pts").string()}).code == kExitUsage);
  const fs::path junk = scratch() / "junk.pts";
  spit(junk, "2 1 4\n0 9\n");
  auto j = cli({"shatter", junk.string()});
  CHECK(j.code == kExitUsage);
  CHECK(j.err.find("line 2") != std::string::npos);
  CHECK(cli({"vc-exact", "--d", "3", "--family", "boxes"}).code == kExitGuard);
  CHECK(cli({"stripes-build", "--n", "2", "--l", "3/2", "-o", (scratch() / "y").string()}).code == kExitUsage);
}

TEST_CASE("cli: extraction and lifting") {
  const fs::path mat = scratch() / "sd.mat";
  {
    std::ofstream out(mat);
    write_matrix(out, superdiagonal_matrix(4));
  }
  auto ok = cli({"extract-check", mat.string()});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("holds") != std::string::npos);
  spit(mat, "2 2 2\n0 1\n0 1\n");
  CHECK(cli({"extract-check", mat.string(), "--mode", "witness"}).code == kExitProperty);

  const fs::path pts = scratch() / "b.pts", m2 = scratch() / "d.mat", lifted = scratch() / "l.pts",
                 cert = scratch() / "l.cert";
  CHECK(cli({"stripes-build", "--n", "2", "--l", "1/2", "-o", pts.string()}).code == kExitOk);
  spit(m2, "2 8 4\n0 1 2 3 0 1 2 3\n0 1 2 3 0 1 2 3\n");
  CHECK(cli({"lift", "--points", pts.string(), "--matrix", m2.string(), "--l", "1/2", "-o", lifted.string()}).code ==
        kExitOk);
  auto cl = cli({"certify-lift", "--points", pts.string(), "--matrix", m2.string(), "--l", "1/2", "--exhaustive", "-o",
                 cert.string()});
  CHECK(cl.code == kExitOk);
  CHECK(cl.out.find("checked 64 masks") != std::string::npos);
  CHECK(cl.out.find("edge=5/6") != std::string::npos);
  auto v = cli({"verify-cert", lifted.string(), cert.string()});
  CHECK(v.code == kExitOk);
  CHECK(cli({"certify-lift", "--points", pts.string(), "--matrix", m2.string(), "--l", "1/2", "--exhaustive",
             "--sample", "3", "-o", cert.string()})
            .code == kExitUsage);
}

TEST_CASE("cli: vc-exact and bounds") {
  auto v = cli({"vc-exact", "--d", "1", "--family", "boxes", "--n-max", "5"});
  CHECK(v.code == kExitOk);
  CHECK(v.out == "3\n");
  auto b = cli({"bounds", "--d-list", "1,2"});
  CHECK(b.code == kExitOk);
  CHECK(b.out == "d\tstripe_ub\ttrivial_ub\trefined_ub\tlower_bound\n1\t5\t5\t6\tNA\n2\t7\t16\t16\tNA\n");
}

TEST_CASE("cli: outputs do not depend on jobs") {
  const fs::path a = scratch() / "ja.mat", b = scratch() / "jb.mat";
  for (const char* jobs : {"1", "4"}) {
    const fs::path& dst = std::string(jobs) == "1" ? a : b;
    CHECK(cli({"--jobs", jobs, "extract-sample", "--m", "2", "--k", "2", "--q", "3/2", "--seed", "12345", "--max-trials",
               "50", "-o", dst.string()})
              .code == kExitOk);
  }
  CHECK(slurp(a) == slurp(b));
  const fs::path wa = scratch() / "wa.pts", wb = scratch() / "wb.pts";
  auto s1 = cli({"search", "--d", "2", "--n", "5", "--budget", "20000", "--seed", "3", "--witness", wa.string()});
  auto s2 = cli({"search", "--d", "2", "--n", "5", "--budget", "20000", "--seed", "3", "--witness", wb.string(),
                 "--jobs", "3"});
  CHECK(s1.code == kExitOk);
  CHECK(s1.out == s2.out);
  CHECK(slurp(wa) == slurp(wb));
}
