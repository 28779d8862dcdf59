#include "ftc/scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

namespace ftc {

const char* to_string(TestKind t) {
  switch (t) {
    case TestKind::Certificate: return "certificate";
    case TestKind::Frobenius: return "frobenius";
    case TestKind::HilbertKunz: return "hk";
    case TestKind::Instability: return "instability";
    case TestKind::Membership: return "membership";
    case TestKind::Tight: return "tight";
  }
  return "?";
}

TestKind test_kind_from_string(const std::string& s) {
  for (TestKind t : {TestKind::Certificate, TestKind::Frobenius, TestKind::HilbertKunz,
                     TestKind::Instability, TestKind::Membership, TestKind::Tight})
    if (s == to_string(t)) return t;
  throw ConfigInvalid("tests: unknown test kind '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (d < 3) throw ConfigInvalid("d: must be >= 3");
  if (gens.empty()) throw ConfigInvalid("gens: at least one generator required");
  for (const RawTerm& g : gens)
    if (g.coeff == 0) throw ConfigInvalid("gens: zero generator");
  if (primes.empty() && primes_up_to < 2)
    throw ConfigInvalid("primes: give an explicit list or primes_up_to >= 2");
  for (std::uint32_t r : residues)
    if (r >= d) throw ConfigInvalid("residues: residue " + std::to_string(r) + " out of range");
  if (tests.empty()) throw ConfigInvalid("tests: empty test set");
  if (format != "csv" && format != "json") throw ConfigInvalid("format: must be csv or json");
  if (e_max < 1) throw ConfigInvalid("e_max: must be >= 1");
  if (hk_e_max < 1) throw ConfigInvalid("hk_e_max: must be >= 1");
  if (jobs < 1) throw ConfigInvalid("jobs: must be >= 1");
  if (tests.count(TestKind::Tight) && gens.size() != 3)
    throw ConfigInvalid("tests: tight needs exactly 3 generators");
}

ExperimentConfig ExperimentConfig::preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "fermat7") {
    c.d = 7;
    c.gens = {RawTerm{4, 0, 0, 1}, RawTerm{0, 4, 0, 1}, RawTerm{0, 0, 4, 1}};
    c.candidate = RawTerm{3, 3, 0, 1};
    c.tests = {TestKind::Certificate, TestKind::Tight, TestKind::Frobenius};
    c.e_max = 2;
  } else if (name == "fermat5") {
    c.d = 5;
    c.gens = {RawTerm{2, 0, 0, 1}, RawTerm{0, 2, 0, 1}, RawTerm{0, 0, 2, 1}};
    c.candidate = RawTerm{1, 1, 1, 1};
    c.tests = {TestKind::Frobenius};
    c.e_max = 3;
  } else if (name == "fermat3") {
    c.d = 3;
    c.gens = {RawTerm{1, 0, 0, 1}, RawTerm{0, 1, 0, 1}};
    c.candidate = RawTerm{0, 0, 2, 1};
    c.tests = {TestKind::Frobenius};
    c.e_max = 3;
    c.note = "candidate z2 (y2 lies in (x,y) already)";
  } else {
    throw ConfigInvalid("preset: unknown preset '" + name + "'");
  }
  return c;
}

namespace {

RawTerm term_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_monomial(j.get<std::string>());
  if (j.is_array() && j.size() == 3)
    return RawTerm{j[0].get<std::uint64_t>(), j[1].get<std::uint64_t>(),
                   j[2].get<std::uint64_t>(), 1};
  throw ConfigInvalid("gens/candidate: expected a monomial string or an [a,b,c] triple");
}

std::string term_to_string(const RawTerm& t) {
  std::ostringstream os;
  if (t.coeff != 1) os << t.coeff;
  if (t.a) { os << "x"; if (t.a > 1) os << t.a; }
  if (t.b) { os << "y"; if (t.b > 1) os << t.b; }
  if (t.c) { os << "z"; if (t.c > 1) os << t.c; }
  if (!t.a && !t.b && !t.c && t.coeff == 1) os << "1";
  return os.str();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("preset")) c = preset(j.at("preset").get<std::string>());
  if (j.contains("d")) c.d = j.at("d").get<std::uint32_t>();
  if (j.contains("gens")) {
    c.gens.clear();
    for (const auto& g : j.at("gens")) c.gens.push_back(term_from_json(g));
  }
  if (j.contains("candidate")) c.candidate = term_from_json(j.at("candidate"));
  if (j.contains("primes")) c.primes = j.at("primes").get<std::vector<std::uint64_t>>();
  if (j.contains("primes_up_to")) c.primes_up_to = j.at("primes_up_to").get<std::uint64_t>();
  if (j.contains("residues")) c.residues = j.at("residues").get<std::vector<std::uint32_t>>();
  if (j.contains("tests")) {
    c.tests.clear();
    for (const auto& t : j.at("tests")) c.tests.insert(test_kind_from_string(t.get<std::string>()));
  }
  if (j.contains("e_max")) c.e_max = j.at("e_max").get<std::uint32_t>();
  if (j.contains("max_dimension")) c.max_dimension = j.at("max_dimension").get<std::size_t>();
  if (j.contains("hk_e_max")) c.hk_e_max = j.at("hk_e_max").get<std::uint32_t>();
  if (j.contains("format")) c.format = j.at("format").get<std::string>();
  if (j.contains("deterministic")) c.deterministic = j.at("deterministic").get<bool>();
  if (j.contains("jobs")) c.jobs = j.at("jobs").get<std::uint32_t>();
  if (j.contains("strict")) c.strict = j.at("strict").get<bool>();
  if (j.contains("note")) c.note = j.at("note").get<std::string>();
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  std::vector<std::string> gs;
  for (const RawTerm& g : gens) gs.push_back(term_to_string(g));
  j["gens"] = gs;
  j["candidate"] = term_to_string(candidate);
  if (!primes.empty()) j["primes"] = primes;
  if (primes_up_to) j["primes_up_to"] = primes_up_to;
  if (!residues.empty()) j["residues"] = residues;
  std::vector<std::string> ts;
  for (TestKind t : tests) ts.push_back(to_string(t));
  j["tests"] = ts;
  j["e_max"] = e_max;
  j["max_dimension"] = max_dimension;
  j["hk_e_max"] = hk_e_max;
  j["format"] = format;
  j["deterministic"] = deterministic;
  j["jobs"] = jobs;
  j["strict"] = strict;
  if (!note.empty()) j["note"] = note;
  return j;
}

namespace {

std::vector<std::uint64_t> select_primes(const ExperimentConfig& c,
                                         std::vector<std::string>& notices) {
  std::vector<std::uint64_t> out;
  auto admit = [&](std::uint64_t p) {
    if (c.d % p == 0) {
      notices.push_back("p=" + std::to_string(p) + " divides d=" + std::to_string(c.d) +
                        "; skipped");
      return;
    }
    if (!c.residues.empty() &&
        std::find(c.residues.begin(), c.residues.end(),
                  static_cast<std::uint32_t>(p % c.d)) == c.residues.end())
      return;
    out.push_back(p);
  };
  if (!c.primes.empty()) {
    for (std::uint64_t p : c.primes) {
      if (!is_prime_u64(p)) throw ConfigInvalid("primes: " + std::to_string(p) + " is not prime");
      admit(p);
    }
  } else {
    for (std::uint64_t p = 2; p <= c.primes_up_to; ++p)
      if (is_prime_u64(p)) admit(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string qualified(const char* verdict, bool proved) {
  return std::string(verdict) + (proved ? "/proved-route" : "/search-evidence");
}

std::string closure_verdict_string(const ClosureVerdict& v) {
  if (v.kind == VerdictKind::Undecided) return "undecided";
  return qualified(to_string(v.kind), v.proved_route);
}

struct PrimeTasks {
  const ExperimentConfig& config;
  std::atomic<bool>* consistency;

  std::vector<ScanRecord> run(std::uint64_t p) const {
    std::vector<ScanRecord> rows;
    RingContext ctx(config.d, p);
    Poly f = normal_form(std::vector<RawTerm>{config.candidate}, ctx);
    std::vector<Poly> gens;
    for (const RawTerm& g : config.gens)
      gens.push_back(normal_form(std::vector<RawTerm>{g}, ctx));

    for (TestKind t : config.tests) {
      ScanRecord row;
      row.p = p;
      row.residue = static_cast<std::uint32_t>(p % config.d);
      row.test = to_string(t);
      row.certificate = "-";
      auto started = std::chrono::steady_clock::now();
      try {
        run_one(t, ctx, f, gens, row);
      } catch (const ConsistencyFailure& ex) {
        row.verdict = "consistency-failure";
        row.detail = ex.what();
        consistency->store(true);
      } catch (const Error& ex) {
        row.verdict = "undecided";
        row.detail = ex.what();
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started).count();
      if (!config.note.empty())
        row.detail = config.note + (row.detail.empty() ? "" : "; " + row.detail);
      rows.push_back(std::move(row));
    }
    return rows;
  }

  void run_one(TestKind t, const RingContext& ctx, const Poly& f, std::vector<Poly>& gens,
               ScanRecord& row) const {
    MembershipOptions mem;
    mem.max_dimension = config.max_dimension;
    switch (t) {
      case TestKind::Membership: {
        MembershipResult r = membership(f, gens, ctx, mem);
        row.exponent = 1;
        row.verdict = qualified(r.contained ? "in" : "out", true);
        row.detail = "rows=" + std::to_string(r.rows) + " cols=" + std::to_string(r.cols);
        break;
      }
      case TestKind::Frobenius: {
        ClosureVerdict v = in_frobenius_closure(f, gens, config.e_max, ctx, mem);
        row.exponent = v.q;
        row.verdict = v.kind == VerdictKind::OutAtAllTested
                          ? qualified("out-at-all-tested", false)
                          : closure_verdict_string(v);
        row.detail = "e=" + std::to_string(v.e) + (v.reason.empty() ? "" : "; " + v.reason);
        break;
      }
      case TestKind::Tight: {
        TightSearchBounds bounds;
        bounds.witness_e_max = config.e_max;
        bounds.max_dimension = config.max_dimension;
        ClosureVerdict v = decide_tight_closure(f, gens, ctx, bounds);
        row.exponent = v.q;
        row.verdict = closure_verdict_string(v);
        if (!v.certificate_kind.empty()) row.certificate = v.certificate_kind;
        row.detail = v.reason;
        if (v.witness)
          row.detail += "; witness e=" + std::to_string(v.witness->e) +
                        " twist=" + std::to_string(v.witness->twist);
        break;
      }
      case TestKind::Certificate: {
        const std::uint64_t p = ctx.p();
        if (ctx.d() != 7 || (p % 7 != 2 && p % 7 != 3)) {
          row.verdict = "undecided";
          row.detail = "no certificate family for residue " + std::to_string(p % ctx.d());
          break;
        }
        if (p % 7 == 3) {
          MembershipCertificate37 cert = build_membership_certificate(p);
          if (!verify_certificate(cert, ctx))
            throw ConsistencyFailure("membership certificate failed verification");
          row.exponent = p;
          row.verdict = qualified("certificate-valid", true);
          row.certificate = "membership-3mod7";
          row.detail = "ell=" + std::to_string(cert.ell) + "; a0=" +
                       std::to_string(cert.coefficients.empty() ? 0 : cert.coefficients[0]);
        } else {
          NonMembershipCertificate27 cert = build_nonmembership_certificate(p);
          CertificateVerifyOptions opts;
          opts.oracle.max_dimension = config.max_dimension;
          if (!verify_certificate(cert, ctx, opts))
            throw ConsistencyFailure("non-membership certificate failed verification");
          row.exponent = checked_mul(p, p);
          row.verdict = qualified("certificate-valid", true);
          row.certificate = "nonmembership-2mod7";
          row.detail = "ell=" + std::to_string(cert.ell) +
                       "; det_m5=" + std::to_string(cert.det_m5) +
                       "; k=" + std::to_string(cert.k) +
                       (cert.p <= opts.oracle_bound ? "; oracle-confirmed" : "");
        }
        break;
      }
      case TestKind::Instability: {
        InstabilitySearchBounds bounds;
        bounds.e_max = config.e_max;
        InstabilityOutcome out = detect_instability(gens, ctx, bounds);
        if (out.witness) {
          row.exponent = checked_pow(ctx.p(), out.witness->e);
          row.verdict = qualified("witness-found", true);
          row.detail = "e=" + std::to_string(out.witness->e) +
                       " twist=" + std::to_string(out.witness->twist) +
                       " sub_degree=" + std::to_string(out.witness->sub_degree);
        } else {
          row.verdict = qualified("not-found", false);
          row.detail = out.truncated ? "scan truncated by budget" : "searched window empty";
        }
        break;
      }
      case TestKind::HilbertKunz: {
        ColengthOptions opts;
        opts.membership = mem;
        auto entries = hk_compare(gens, f, 1, config.hk_e_max, ctx, opts);
        row.exponent = entries.back().q;
        bool all_equal = true;
        std::uint32_t first_diff = 0;
        std::ostringstream detail;
        for (const auto& e : entries) {
          if (!e.equal && all_equal) { all_equal = false; first_diff = e.e; }
          detail << "e=" << e.e << ":" << e.len_ideal << (e.equal ? "=" : ">")
                 << e.len_with_candidate << "; ";
        }
        row.verdict = all_equal
                          ? qualified("hk-equal-through-tested", true)
                          : qualified(("hk-diverges-at-e=" + std::to_string(first_diff)).c_str(),
                                      true);
        row.detail = detail.str();
        break;
      }
    }
  }
};

}  // namespace

ScanResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ScanResult result;
  std::vector<std::uint64_t> primes = select_primes(config, result.notices);
  std::atomic<bool> consistency{false};
  PrimeTasks tasks{config, &consistency};

  std::vector<std::vector<ScanRecord>> slots(primes.size());
  if (config.jobs <= 1 || primes.size() <= 1) {
    for (std::size_t i = 0; i < primes.size(); ++i) slots[i] = tasks.run(primes[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::uint32_t n_threads = std::min<std::uint32_t>(
        config.jobs, static_cast<std::uint32_t>(primes.size()));
    for (std::uint32_t w = 0; w < n_threads; ++w)
      pool.emplace_back([&]() {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= primes.size()) return;
          slots[i] = tasks.run(primes[i]);
        }
      });
    for (std::thread& th : pool) th.join();
  }
  for (auto& rows : slots)
    for (ScanRecord& r : rows) result.records.push_back(std::move(r));
  std::sort(result.records.begin(), result.records.end(),
            [](const ScanRecord& a, const ScanRecord& b) {
              return a.p != b.p ? a.p < b.p : a.test < b.test;
            });
  result.consistency_failure = consistency.load();
  return result;
}

namespace {

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

}  // namespace

std::string render_report(const std::vector<ScanRecord>& records, const std::string& format,
                          bool deterministic) {
  if (records.empty()) throw IoError("refusing to render an empty report");
  std::ostringstream os;
  if (format == "csv") {
    os << "p,residue,test,exponent,verdict,certificate,detail\n";
    for (const ScanRecord& r : records) {
      std::string detail = r.detail;
      if (!deterministic) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", r.wall_ms);
        detail += (detail.empty() ? "" : "; ") + std::string("wall_ms=") + buf;
      }
      os << r.p << ',' << r.residue << ',' << r.test << ',' << r.exponent << ',' << r.verdict
         << ',' << r.certificate << ',' << csv_safe(detail) << '\n';
    }
  } else if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ScanRecord& r : records) {
      nlohmann::ordered_json row;
      row["p"] = r.p;
      row["residue"] = r.residue;
      row["test"] = r.test;
      row["exponent"] = r.exponent;
      row["verdict"] = r.verdict;
      row["certificate"] = r.certificate;
      row["detail"] = r.detail;
      if (!deterministic) row["wall_ms"] = r.wall_ms;
      arr.push_back(std::move(row));
    }
    os << arr.dump(2) << '\n';
  } else {
    throw ConfigInvalid("format: must be csv or json");
  }
  return os.str();
}

void emit_report(const std::vector<ScanRecord>& records, const std::string& format,
                 const std::string& path, bool deterministic) {
  std::string body = render_report(records, format, deterministic);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << body;
  if (!out) throw IoError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------
// CLI
// ---------------------------------------------------------------------

namespace {

std::vector<RawTerm> parse_gens_flag(const std::string& csv) {
  std::vector<RawTerm> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_monomial(item));
  if (out.empty()) throw ConfigInvalid("gens: empty generator list");
  return out;
}

struct CommonArgs {
  std::uint32_t d = 7;
  std::uint64_t p = 7;
  std::string gens = "x4,y4,z4";
  std::string candidate = "x3y3";
  std::uint32_t e_max = 2;
  std::size_t budget = 4000;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_candidate = true) {
  cmd->add_option("--d", a.d, "Fermat degree d");
  cmd->add_option("--p", a.p, "prime characteristic")->required();
  cmd->add_option("--gens", a.gens, "comma-separated monomial generators");
  if (with_candidate) cmd->add_option("--candidate", a.candidate, "candidate monomial");
  cmd->add_option("--e-max", a.e_max, "Frobenius search depth");
  cmd->add_option("--budget", a.budget, "dense dimension budget");
}

struct Loaded {
  RingContext ctx;
  Poly f;
  std::vector<Poly> gens;
};

Loaded load(const CommonArgs& a) {
  RingContext ctx(a.d, a.p);
  std::vector<Poly> gens;
  for (const RawTerm& t : parse_gens_flag(a.gens))
    gens.push_back(normal_form(std::vector<RawTerm>{t}, ctx));
  Poly f = normal_form(std::vector<RawTerm>{parse_monomial(a.candidate)}, ctx);
  return Loaded{ctx, f, gens};
}

int verdict_exit(const ClosureVerdict& v, bool strict) {
  if (strict && v.kind == VerdictKind::Undecided) return 1;
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"Frobenius-power and tight-closure calculator for Fermat rings"};
  app.require_subcommand(1);

  // membership
  auto* c_mem = app.add_subcommand("membership", "ideal membership at the candidate's degree");
  CommonArgs a_mem;
  add_common(c_mem, a_mem);
  bool mem_no_strand = false, mem_no_absorb = false;
  c_mem->add_flag("--no-strand", mem_no_strand, "disable strand compression");
  c_mem->add_flag("--no-absorb", mem_no_absorb, "disable pure-power absorption");

  // frobenius
  auto* c_fro = app.add_subcommand("frobenius", "Frobenius-closure search up to e-max");
  CommonArgs a_fro;
  add_common(c_fro, a_fro);

  // tight
  auto* c_tight = app.add_subcommand("tight", "tight-closure decision");
  CommonArgs a_tight;
  add_common(c_tight, a_tight);
  std::string tight_route = "auto";
  bool tight_strict = false;
  c_tight->add_option("--route", tight_route, "auto|certificate|generic");
  c_tight->add_flag("--strict", tight_strict, "exit 1 on Undecided");

  // certificate
  auto* c_cert = app.add_subcommand("certificate", "binomial certificate for residues 2,3 mod 7");
  std::uint64_t cert_p = 3;
  c_cert->add_option("--p", cert_p, "prime = 2 or 3 mod 7")->required();

  // instability
  auto* c_inst = app.add_subcommand("instability", "syzygy-bundle instability witness search");
  CommonArgs a_inst;
  add_common(c_inst, a_inst, /*with_candidate=*/false);

  // hk
  auto* c_hk = app.add_subcommand("hk", "Hilbert-Kunz colength sequence (CSV rows)");
  CommonArgs a_hk;
  add_common(c_hk, a_hk);
  bool hk_compare_flag = false;
  c_hk->add_flag("--compare", hk_compare_flag, "also compare against (I, candidate)");

  // scan
  auto* c_scan = app.add_subcommand("scan", "batch experiment over a prime range");
  std::string scan_preset, scan_config, scan_out, scan_format = "csv", scan_tests;
  std::string scan_gens, scan_candidate, scan_residues;
  std::uint64_t scan_up_to = 0;
  std::vector<std::uint64_t> scan_primes;
  std::uint32_t scan_d = 0, scan_e_max = 0, scan_jobs = 0;
  std::size_t scan_budget = 0;
  bool scan_det = false, scan_strict = false;
  c_scan->add_option("--preset", scan_preset, "fermat7|fermat5|fermat3");
  c_scan->add_option("--config", scan_config, "JSON config file (flags override it)");
  c_scan->add_option("--d", scan_d, "Fermat degree d");
  c_scan->add_option("--gens", scan_gens, "comma-separated monomial generators");
  c_scan->add_option("--candidate", scan_candidate, "candidate monomial");
  c_scan->add_option("--primes-up-to", scan_up_to, "scan all primes <= bound");
  c_scan->add_option("--primes", scan_primes, "explicit prime list");
  c_scan->add_option("--residues", scan_residues, "comma-separated residues mod d");
  c_scan->add_option("--tests", scan_tests, "comma-separated tests to run");
  c_scan->add_option("--e-max", scan_e_max, "Frobenius search depth");
  c_scan->add_option("--budget", scan_budget, "dense dimension budget");
  c_scan->add_option("--out", scan_out, "output path (stdout when omitted)");
  c_scan->add_option("--format", scan_format, "csv|json");
  c_scan->add_option("--jobs", scan_jobs, "parallel workers across primes");
  c_scan->add_flag("--deterministic", scan_det, "byte-stable output (no wall times)");
  c_scan->add_flag("--strict", scan_strict, "exit 1 when every outcome is Undecided");

  std::vector<const char*> argv;
  argv.push_back("ftc");
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_mem->parsed()) {
      Loaded in = load(a_mem);
      MembershipOptions opts;
      opts.strand_compression = !mem_no_strand;
      opts.absorb_pure_powers = !mem_no_absorb;
      opts.max_dimension = a_mem.budget;
      MembershipResult r = membership(in.f, in.gens, in.ctx, opts);
      std::cout << (r.contained ? "IN" : "OUT") << " (" << r.rows << "x" << r.cols
                << " system)\n";
      if (r.contained) {
        for (std::size_t i = 0; i < in.gens.size(); ++i)
          if (!r.coefficients[i].is_zero())
            std::cout << "  h[" << i << "] = " << r.coefficients[i].to_string() << "\n";
      } else if (!r.functional.empty()) {
        std::cout << "  separating functional support: " << r.functional.size()
                  << " monomial(s)\n";
      }
      return 0;
    }
    if (c_fro->parsed()) {
      Loaded in = load(a_fro);
      MembershipOptions opts;
      opts.max_dimension = a_fro.budget;
      ClosureVerdict v = in_frobenius_closure(in.f, in.gens, a_fro.e_max, in.ctx, opts);
      std::cout << to_string(v.kind);
      if (v.kind == VerdictKind::InFrobeniusClosure || v.kind == VerdictKind::OutAtAllTested)
        std::cout << " e=" << v.e << " (q=" << v.q << ")";
      if (!v.reason.empty()) std::cout << " [" << v.reason << "]";
      std::cout << "\n";
      return 0;
    }
    if (c_tight->parsed()) {
      Loaded in = load(a_tight);
      TightSearchBounds bounds;
      bounds.witness_e_max = a_tight.e_max;
      bounds.max_dimension = a_tight.budget;
      if (tight_route == "certificate") bounds.route = TightRoute::Certificate;
      else if (tight_route == "generic") bounds.route = TightRoute::Generic;
      else if (tight_route != "auto") throw ConfigInvalid("route: auto|certificate|generic");
      ClosureVerdict v = decide_tight_closure(in.f, in.gens, in.ctx, bounds);
      if (v.kind == VerdictKind::TightIn) std::cout << "TightIn with Q=" << v.q << "\n";
      else if (v.kind == VerdictKind::TightOut) std::cout << "TightOut with Q=" << v.q << "\n";
      else std::cout << "Undecided: " << v.reason << "\n";
      if (!v.certificate.is_null()) std::cout << v.certificate.dump(2) << "\n";
      return verdict_exit(v, tight_strict);
    }
    if (c_cert->parsed()) {
      RingContext ctx(7, cert_p);
      if (cert_p % 7 == 3) {
        MembershipCertificate37 cert = build_membership_certificate(cert_p);
        bool ok = verify_certificate(cert, ctx);
        std::cout << certificate_json(cert).dump(2) << "\n";
        if (!ok) { std::cerr << "certificate failed verification\n"; return 3; }
      } else if (cert_p % 7 == 2) {
        NonMembershipCertificate27 cert = build_nonmembership_certificate(cert_p);
        bool ok = verify_certificate(cert, ctx, {});
        std::cout << certificate_json(cert).dump(2) << "\n";
        if (!ok) { std::cerr << "certificate failed verification\n"; return 3; }
      } else {
        throw ConfigInvalid("p: certificate families exist for residues 2 and 3 mod 7 only");
      }
      return 0;
    }
    if (c_inst->parsed()) {
      RingContext ctx(a_inst.d, a_inst.p);
      std::vector<Poly> gens;
      for (const RawTerm& t : parse_gens_flag(a_inst.gens))
        gens.push_back(normal_form(std::vector<RawTerm>{t}, ctx));
      InstabilitySearchBounds bounds;
      bounds.e_max = a_inst.e_max;
      InstabilityOutcome out = detect_instability(gens, ctx, bounds);
      if (out.witness) std::cout << witness_json(*out.witness).dump(2) << "\n";
      else std::cout << "NotFound"
                     << (out.truncated ? " (scan truncated by budget)" : "") << "\n";
      return 0;
    }
    if (c_hk->parsed()) {
      Loaded in = load(a_hk);
      ColengthOptions opts;
      opts.membership.max_dimension = a_hk.budget;
      if (hk_compare_flag) {
        auto entries = hk_compare(in.gens, in.f, 1, a_hk.e_max, in.ctx, opts);
        for (const auto& e : entries)
          std::cout << in.ctx.p() << ',' << e.e << ',' << e.q << ',' << e.len_ideal << ','
                    << e.len_with_candidate << ',' << (e.equal ? "equal" : "strict") << "\n";
      } else {
        HKSequence seq = hk_sequence(in.gens, 1, a_hk.e_max, in.ctx, opts);
        hk_csv(seq, std::cout);
      }
      return 0;
    }
    if (c_scan->parsed()) {
      ExperimentConfig config;
      if (!scan_config.empty()) {
        std::ifstream file(scan_config);
        if (!file) throw IoError("cannot read config file '" + scan_config + "'");
        nlohmann::json j = nlohmann::json::parse(file);
        if (!scan_preset.empty()) j["preset"] = scan_preset;
        config = ExperimentConfig::from_json(j);
      } else if (!scan_preset.empty()) {
        config = ExperimentConfig::preset(scan_preset);
      }
      if (scan_d) config.d = scan_d;
      if (!scan_gens.empty()) config.gens = parse_gens_flag(scan_gens);
      if (!scan_candidate.empty()) config.candidate = parse_monomial(scan_candidate);
      if (scan_up_to) config.primes_up_to = scan_up_to;
      if (!scan_primes.empty()) config.primes = scan_primes;
      if (!scan_residues.empty()) {
        config.residues.clear();
        std::stringstream ss(scan_residues);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) config.residues.push_back(static_cast<std::uint32_t>(std::stoul(item)));
      }
      if (!scan_tests.empty()) {
        config.tests.clear();
        std::stringstream ss(scan_tests);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) config.tests.insert(test_kind_from_string(item));
      }
      if (scan_e_max) config.e_max = scan_e_max;
      if (scan_budget) config.max_dimension = scan_budget;
      if (scan_jobs) config.jobs = scan_jobs;
      if (c_scan->count("--format")) config.format = scan_format;
      if (scan_det) config.deterministic = true;
      if (scan_strict) config.strict = true;

      ScanResult result = run_experiment(config);
      for (const std::string& n : result.notices) std::cerr << "notice: " << n << "\n";
      if (!scan_out.empty())
        emit_report(result.records, config.format, scan_out, config.deterministic);
      else
        std::cout << render_report(result.records, config.format, config.deterministic);
      if (result.consistency_failure) return 3;
      if (config.strict) {
        bool all_undecided = true;
        for (const ScanRecord& r : result.records)
          if (r.verdict.rfind("undecided", 0) != 0) { all_undecided = false; break; }
        if (all_undecided) return 1;
      }
      return 0;
    }
  } catch (const ConsistencyFailure& ex) {
    std::cerr << "consistency failure: " << ex.what() << "\n";
    return 3;
  } catch (const ConfigInvalid& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  } catch (const IoError& ex) {
    std::cerr << "io error: " << ex.what() << "\n";
    return 2;
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace ftc
