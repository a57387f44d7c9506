#pragma once

// Chain-level Floer-Novikov ranks from index data, and the prime-period
// certification arithmetic built on mean-index gaps.

#include "genusflow/orbit_analysis.hpp"
#include "genusflow/sp2_index.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace genusflow {

struct FixedPointIndexData {
  std::string id;
  double mean_index = 0.0;
  int cz = 0;
  sp2::SpectralClass spectral_class = sp2::SpectralClass::HyperbolicPositive;
};

/// Numeric data compares mean indices with tolerance 1e-9; exact data with 0.
enum class IndexMode { Numeric, Exact };

double index_tolerance(IndexMode mode) noexcept;

/// Reason the datum breaks |Delta - mu| < 1 or the class rules, if it does:
/// elliptic needs odd mu and non-integer Delta, hyperbolic needs Delta = mu
/// (within 1e-6) with mu even exactly for positive eigenvalues.
std::optional<std::string> index_data_problem(const FixedPointIndexData& p);

std::vector<FixedPointIndexData> index_data(const std::vector<FixedPointRecord>& records);

struct ChainSummary {
  std::map<int, long> ranks; // degree -> number of generators

  long total() const noexcept;
};

/// Throws InvalidIndexData listing every offending point.
ChainSummary chain_ranks(const std::vector<FixedPointIndexData>& points);

struct HfnResult {
  bool lacunary = true;
  std::map<int, long> ranks;                       // valid when lacunary
  std::optional<std::pair<int, int>> adjacent;     // first pair of occupied neighbouring degrees
  long rank(int degree) const;
};

/// With no two occupied adjacent degrees the differential vanishes and the
/// homology equals the chain groups; otherwise the result is NotLacunary.
HfnResult hfn_from_lacunary(const ChainSummary& summary);

/// min k > 1 with k |Delta(x0) - Delta(y)| > 3 for all y in S, or 2 when S is
/// empty. Throws SContainsEqualIndex.
int tau0(const FixedPointIndexData& x0, const std::vector<FixedPointIndexData>& S,
         IndexMode mode = IndexMode::Numeric);

/// Conley-Zehnder index forced by a nondegenerate mean index: Delta itself
/// when it is an integer, otherwise the odd integer in (Delta - 1, Delta + 1).
int forced_cz(double delta, double tol);

struct InequalityEntry {
  enum class Kind { Separation, ForcedEquality };
  std::string y;
  Kind kind = Kind::Separation;
  double gap = 0.0;    // |Delta(x0) - Delta(y)|
  double lhs = 0.0;    // tau * gap - 2, the lower bound for |mu(x0^tau) - mu(y^tau)|
  double margin = 0.0; // lhs - 1
  std::string text;
};

struct PrimeLedger {
  int tau = 0;
  double delta0 = 0.0;
  double iterated_delta = 0.0; // tau * Delta(x0)
  double mu_lo = 0.0, mu_hi = 0.0;
  int mu = 0;
  std::vector<InequalityEntry> entries;
  std::string conclusion;

  double min_margin() const noexcept;
};

/// Throws PreconditionViolation (tau not prime, Delta(x0) = 0) and
/// MarginFailure (some separation inequality does not hold).
PrimeLedger certify_prime(const FixedPointIndexData& x0, const std::vector<FixedPointIndexData>& all_points, int tau,
                          IndexMode mode = IndexMode::Numeric);

std::vector<int> primes_up_to(int n);
long prime_count(int n);
bool is_prime(int n) noexcept;

enum class Theorem { Elliptic, NonzeroMean, Count };

std::string to_string(Theorem t);

struct CountCase {
  std::string extra; // the fixed point beyond the 2g - 2 generators
  int mu = 0;
  std::optional<std::string> partner; // degree-1 point used when mu = 0
  Theorem reduction = Theorem::NonzeroMean;
  std::string text;
};

enum class CertificateStatus { Certified, NoHypothesisSatisfied };

std::string to_string(CertificateStatus s);

struct Certificate {
  CertificateStatus status = CertificateStatus::NoHypothesisSatisfied;
  std::vector<Theorem> applicable;
  std::optional<CountCase> count_case;
  std::optional<std::string> x0;
  std::vector<std::string> S;
  int tau0 = 2;
  int N = 0;
  std::vector<PrimeLedger> certified;
  long expected_prime_count = 0; // pi(N) - pi(tau0)
  std::vector<std::string> assumptions;

  bool applies(Theorem t) const noexcept;
};

/// Throws InconsistentInput for index data that no nondegenerate map with the
/// given genus can produce.
Certificate classify_case(const std::vector<FixedPointIndexData>& points, int genus, int N = 10000,
                          IndexMode mode = IndexMode::Numeric);

FixedPointIndexData index_data_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FixedPointIndexData& p);
nlohmann::json to_json(const ChainSummary& c);
nlohmann::json to_json(const HfnResult& h);
nlohmann::json to_json(const PrimeLedger& l);
nlohmann::json to_json(const Certificate& c);

} // namespace genusflow
