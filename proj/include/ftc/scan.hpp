#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftc/closure.hpp"
#include "ftc/hilbert_kunz.hpp"

namespace ftc {

enum class TestKind { Certificate, Frobenius, HilbertKunz, Instability, Membership, Tight };
const char* to_string(TestKind t);
TestKind test_kind_from_string(const std::string& s);  // throws ConfigInvalid

struct ExperimentConfig {
  std::uint32_t d = 7;
  std::vector<RawTerm> gens;            // monomial generators (exponent triples)
  RawTerm candidate{3, 3, 0, 1};
  std::vector<std::uint64_t> primes;    // explicit selection; empty = range mode
  std::uint64_t primes_up_to = 0;       // inclusive upper bound in range mode
  std::vector<std::uint32_t> residues;  // filter mod d; empty = all
  std::set<TestKind> tests{TestKind::Tight};
  std::uint32_t e_max = 2;
  std::size_t max_dimension = 4000;     // dense budget per system
  std::uint32_t hk_e_max = 1;
  std::string format = "csv";           // csv | json
  bool deterministic = false;
  std::uint32_t jobs = 1;
  bool strict = false;
  std::string note;

  void validate() const;  // throws ConfigInvalid with a field-level message
  static ExperimentConfig preset(const std::string& name);
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ScanRecord {
  std::uint64_t p = 2;
  std::uint32_t residue = 0;
  std::string test;
  std::uint64_t exponent = 1;  // level actually tested (q or Q)
  std::string verdict;         // kind plus proved-route / search-evidence qualifier
  std::string certificate;     // certificate kind or "-"
  std::string detail;
  double wall_ms = 0.0;
};

struct ScanResult {
  std::vector<ScanRecord> records;  // sorted by (p, test)
  bool consistency_failure = false;
  std::vector<std::string> notices;
};

ScanResult run_experiment(const ExperimentConfig& config);

/// CSV header: p,residue,test,exponent,verdict,certificate,detail
/// (byte-identical across runs when deterministic). Throws IoError for an
/// empty record list; no file is created then.
void emit_report(const std::vector<ScanRecord>& records, const std::string& format,
                 const std::string& path, bool deterministic);
std::string render_report(const std::vector<ScanRecord>& records, const std::string& format,
                          bool deterministic);

/// Exit codes: 0 success, 1 only-Undecided under --strict, 2 config errors,
/// 3 internal consistency failures.
int cli_main(const std::vector<std::string>& args);

}  // namespace ftc
