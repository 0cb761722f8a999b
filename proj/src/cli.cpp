#include "torusvc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "torusvc/bounds.hpp"
#include "torusvc/extraction.hpp"
#include "torusvc/io.hpp"
#include "torusvc/lifting.hpp"
#include "torusvc/stripes.hpp"
#include "torusvc/vc_search.hpp"

namespace torusvc {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Family parse_family(const std::string& name, const std::string& l) {
  if (name == "boxes") return Family::boxes();
  if (name == "cubes") return Family::cubes();
  if (name == "stripes-any") return Family::stripes_any();
  if (name == "stripes") {
    if (l.empty()) throw UsageError("--family stripes needs --l");
    return Family::stripes(Rat::parse(l));
  }
  throw UsageError("unknown family '" + name + "' (boxes, cubes, stripes, stripes-any)");
}

template <class T, class Reader>
T load(const std::string& path, Reader reader) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return reader(in);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

PointSet load_points(const std::string& path) { return load<PointSet>(path, read_points); }
SymbolMatrix load_matrix(const std::string& path) { return load<SymbolMatrix>(path, read_matrix); }
Certificate load_certificate(const std::string& path) { return load<Certificate>(path, read_certificate); }

void save(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  writer(f);
  if (!f) throw UsageError("write failed for " + path);
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<std::uint64_t> parse_d_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v == 0) throw UsageError("--d-list: bad entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--d-list is empty");
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"VC dimension of boxes, cubes and stripes on the torus"};
  app.require_subcommand(1);
  unsigned jobs = 1;
  auto add_jobs = [&](CLI::App* sc) { sc->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1U, 256U)); };
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1U, 256U));

  std::string points_path, matrix_path, cert_path, output, family_name = "boxes", l_text, mode = "exhaustive",
                                                             q_text, d_list;
  std::size_t n = 0, d = 0, m = 0, k = 0, ambient = 0, n_max = kEnumMaxPoints, samples = 0;
  std::uint64_t seed = 0, budget = 0, max_trials = 0;
  bool exhaustive = false;
  std::string witness_out;

  auto* shatter = app.add_subcommand("shatter", "decide whether a family shatters a point set");
  shatter->add_option("points", points_path)->required();
  shatter->add_option("--family", family_name);
  shatter->add_option("--l", l_text, "stripe length p/q");
  shatter->add_option("-o", output, "certificate output");
  add_jobs(shatter);

  auto* growth = app.add_subcommand("growth", "number of subsets a family cuts out");
  growth->add_option("points", points_path)->required();
  growth->add_option("--family", family_name);
  growth->add_option("--l", l_text);
  add_jobs(growth);

  auto* sbuild = app.add_subcommand("stripes-build", "n+1 points shattered by stripes of length l");
  sbuild->add_option("--n", n)->required();
  sbuild->add_option("--l", l_text)->required();
  sbuild->add_option("--ambient", ambient, "dimension, at least 2^n");
  sbuild->add_option("-o", output)->required();
  add_jobs(sbuild);

  auto* echeck = app.add_subcommand("extract-check", "check the extraction property of a matrix");
  echeck->add_option("matrix", matrix_path)->required();
  echeck->add_option("--mode", mode)->check(CLI::IsMember({"exhaustive", "witness"}));
  add_jobs(echeck);

  auto* esample = app.add_subcommand("extract-sample", "sample balanced matrices until one has the property");
  esample->add_option("--m", m)->required();
  esample->add_option("--k", k)->required();
  esample->add_option("--q", q_text)->required();
  esample->add_option("--seed", seed)->required();
  esample->add_option("--max-trials", max_trials)->required();
  esample->add_option("-o", output)->required();
  add_jobs(esample);

  auto* lift = app.add_subcommand("lift", "lift a stripe-shattered set through a matrix");
  lift->add_option("--points", points_path)->required();
  lift->add_option("--matrix", matrix_path)->required();
  lift->add_option("--l", l_text)->required();
  lift->add_option("-o", output)->required();
  add_jobs(lift);

  auto* clift = app.add_subcommand("certify-lift", "build and check cube witnesses for a lifted set");
  clift->add_option("--points", points_path)->required();
  clift->add_option("--matrix", matrix_path)->required();
  clift->add_option("--l", l_text)->required();
  auto* ex_flag = clift->add_flag("--exhaustive", exhaustive);
  auto* sample_opt = clift->add_option("--sample", samples);
  clift->add_option("--seed", seed);
  clift->add_option("-o", output)->required();
  ex_flag->excludes(sample_opt);
  add_jobs(clift);

  auto* vcert = app.add_subcommand("verify-cert", "re-check a certificate with containment tests");
  vcert->add_option("points", points_path)->required();
  vcert->add_option("cert", cert_path)->required();
  add_jobs(vcert);

  auto* bounds = app.add_subcommand("bounds", "table of exact VC bounds");
  bounds->add_option("--d-list", d_list)->required();
  add_jobs(bounds);

  auto* vcx = app.add_subcommand("vc-exact", "exact VC dimension by enumeration");
  vcx->add_option("--d", d)->required();
  vcx->add_option("--family", family_name);
  vcx->add_option("--l", l_text);
  vcx->add_option("--n-max", n_max);
  vcx->add_option("--witness", witness_out, "write the shattered set");
  vcx->add_option("-o", output, "certificate output");
  add_jobs(vcx);

  auto* search = app.add_subcommand("search", "randomized search for a shattered set");
  search->add_option("--d", d)->required();
  search->add_option("--n", n)->required();
  search->add_option("--budget", budget)->required();
  search->add_option("--seed", seed)->required();
  search->add_option("--family", family_name);
  search->add_option("--l", l_text);
  search->add_option("--witness", witness_out, "write the shattered set");
  search->add_option("-o", output, "certificate output");
  add_jobs(search);

  std::vector<std::string> argv_store{"torusvc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (shatter->parsed()) {
      PointSet ps = load_points(points_path);
      Family fam = parse_family(family_name, l_text);
      if (ps.size() > kShatterGuard) {
        throw GuardError("shattering check refuses n = " + std::to_string(ps.size()));
      }
      ShatterReport rep = shatter_report(ps, fam, jobs);
      if (!rep.shattered) {
        out << "not shattered\tmissing mask=" << mask_hex(*rep.missing) << '\n';
        return kExitProperty;
      }
      out << "shattered\t" << rep.witnesses.size() << " masks\n";
      if (!output.empty()) save(output, [&](std::ostream& f) { write_certificate(f, make_certificate(ps, rep.witnesses)); });
      return kExitOk;
    }
    if (growth->parsed()) {
      PointSet ps = load_points(points_path);
      out << growth_count(ps, parse_family(family_name, l_text), jobs) << '\n';
      return kExitOk;
    }
    if (sbuild->parsed()) {
      PointSet ps = build_stripe_shattered_set(n, Rat::parse(l_text), ambient);
      save(output, [&](std::ostream& f) { write_points(f, ps); });
      out << "wrote " << ps.size() << " points in dimension " << ps.dim() << " over " << ps.denom() << '\n';
      return kExitOk;
    }
    if (echeck->parsed()) {
      SymbolMatrix mat = load_matrix(matrix_path);
      auto v = check_extraction(mat, mode == "witness" ? ExtractionMode::witness : ExtractionMode::exhaustive, jobs);
      if (v.holds) {
        out << "holds\n";
        return kExitOk;
      }
      out << "fails\n";
      if (v.counterexample_word) {
        out << "word=";
        for (std::size_t i = 0; i < v.counterexample_word->size(); ++i) out << (i ? "," : "") << (*v.counterexample_word)[i];
        out << '\n';
      }
      if (v.failure_witness) {
        const auto& w = *v.failure_witness;
        std::vector<std::size_t> syms(w.symbols.begin(), w.symbols.end());
        out << "rows=" << join(w.rows) << "\tcols=" << join(w.cols) << "\tsymbols=" << join(syms) << '\n';
      }
      return kExitProperty;
    }
    if (esample->parsed()) {
      auto res = sample_extraction_matrix(m, k, Rat::parse(q_text), max_trials, seed);
      if (!res.matrix) {
        out << "exhausted\ttrials=" << res.trials_used << '\n';
        return kExitProperty;
      }
      save(output, [&](std::ostream& f) { write_matrix(f, *res.matrix); });
      out << "found\ttrials=" << res.trials_used << '\n';
      return kExitOk;
    }
    if (lift->parsed()) {
      LiftInstance inst = lift_points(load_points(points_path), load_matrix(matrix_path), Rat::parse(l_text));
      save(output, [&](std::ostream& f) { write_points(f, inst.lifted); });
      out << "wrote " << inst.lifted.size() << " points in dimension " << inst.lifted.dim() << " over "
          << inst.lifted.denom() << '\n';
      return kExitOk;
    }
    if (clift->parsed()) {
      LiftInstance inst = lift_points(load_points(points_path), load_matrix(matrix_path), Rat::parse(l_text));
      LiftCheck check = sample_opt->count() > 0 ? LiftCheck::sample(samples, seed) : LiftCheck::all();
      LiftReport rep = verify_lift(inst, check, jobs, true);
      std::vector<std::pair<Mask, Shape>> entries;
      for (auto& [mask, cube] : rep.witnesses) entries.emplace_back(mask, Shape(cube));
      save(output, [&](std::ostream& f) { write_certificate(f, make_certificate(inst.lifted, entries)); });
      out << "checked " << rep.checked << " masks\tfailures=" << rep.failures.size() << "\tedge=" << inst.cube_edge()
          << '\n';
      for (const auto& f : rep.failures) err << "mask=" << mask_hex(f.mask) << ": " << f.reason << '\n';
      return rep.passed() ? kExitOk : kExitProperty;
    }
    if (vcert->parsed()) {
      PointSet ps = load_points(points_path);
      Certificate cert = load_certificate(cert_path);
      CertificateCheck chk = verify_certificate(ps, cert);
      for (Mask bad : chk.failures) out << "failed mask=" << mask_hex(bad) << '\n';
      if (!chk.passed()) return kExitProperty;
      out << "verified " << cert.entries.size() << " entries, " << chk.distinct_masks << " masks ("
          << (chk.complete ? "complete" : "partial") << ")\n";
      return kExitOk;
    }
    if (bounds->parsed()) {
      out << format_bounds_table(bounds_table(parse_d_list(d_list), jobs));
      return kExitOk;
    }
    if (vcx->parsed()) {
      Family fam = parse_family(family_name, l_text);
      VcExactResult res = vc_exact(d, fam, n_max, jobs);
      out << res.value << '\n';
      if (res.refuted_at) {
        err << "no configuration of " << *res.refuted_at << " points is shattered ("
            << (res.refutation_complete ? "complete enumeration" : "level grid only, not a proof") << ")\n";
      } else {
        err << "every size up to n-max = " << n_max << " is shattered; raise --n-max\n";
      }
      if (res.witness && !witness_out.empty()) save(witness_out, [&](std::ostream& f) { write_points(f, *res.witness); });
      if (res.witness && !output.empty()) {
        save(output, [&](std::ostream& f) { write_certificate(f, make_certificate(*res.witness, res.certificates)); });
      }
      return kExitOk;
    }
    if (search->parsed()) {
      auto res = search_shattered(d, n, budget, seed, parse_family(family_name, l_text));
      if (!res) {
        out << "not found\n";
        return kExitProperty;
      }
      out << "found\tevaluations=" << res->evaluations << '\n';
      if (!witness_out.empty()) save(witness_out, [&](std::ostream& f) { write_points(f, res->points); });
      if (!output.empty()) {
        save(output, [&](std::ostream& f) { write_certificate(f, make_certificate(res->points, res->certificates)); });
      }
      return kExitOk;
    }
  } catch (const GuardError& e) {
    err << "refused: " << e.what() << '\n';
    return kExitGuard;
  } catch (const LiftError& e) {
    err << "error: " << e.what() << '\n';
    return kExitProperty;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace torusvc
