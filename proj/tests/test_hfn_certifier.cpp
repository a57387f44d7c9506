#include "genusflow/error.hpp"
#include "genusflow/hfn_certifier.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace genusflow;
using sp2::SpectralClass;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected genusflow::Error");
  return ErrorCode::BadConfig;
}

FixedPointIndexData saddle(const std::string& id) { return {id, 0.0, 0, SpectralClass::HyperbolicPositive}; }

std::vector<FixedPointIndexData> constructed(int g) {
  std::vector<FixedPointIndexData> v;
  for (int i = 0; i < 2 * g - 2; ++i) v.push_back(saddle("h" + std::to_string(i)));
  return v;
}

// min k > 1 with k |d0 - d| > 3 for every d, by plain scanning.
int brute_tau0(double d0, const std::vector<double>& S, int limit = 10000) {
  if (S.empty()) return 2;
  for (int k = 2; k <= limit; ++k) {
    bool ok = true;
    for (double d : S) ok = ok && k * std::abs(d0 - d) > 3.0;
    if (ok) return k;
  }
  return -1;
}

// Trial division prime counter.
long slow_pi(int n) {
  long c = 0;
  for (int k = 2; k <= n; ++k) {
    bool p = true;
    for (int d = 2; d * d <= k; ++d) p = p && k % d != 0;
    c += p;
  }
  return c;
}

} // namespace

TEST_CASE("index data validation") {
  CHECK(!index_data_problem(saddle("a")));
  CHECK(!index_data_problem({"e", 0.5, 1, SpectralClass::Elliptic}));
  CHECK(!index_data_problem({"n", 1.0, 1, SpectralClass::HyperbolicNegative}));
  CHECK(!index_data_problem({"p", -2.0, -2, SpectralClass::HyperbolicPositive}));

  CHECK(index_data_problem({"x", 0.0, 2, SpectralClass::HyperbolicPositive}));  // |Delta - mu| >= 1
  CHECK(index_data_problem({"x", 0.0, 1, SpectralClass::HyperbolicNegative}));  // boundary is not below 1
  CHECK(index_data_problem({"x", 0.5, 0, SpectralClass::Elliptic}));            // even
  CHECK(index_data_problem({"x", 1.0, 1, SpectralClass::Elliptic}));            // integer mean index
  CHECK(index_data_problem({"x", 0.3, 0, SpectralClass::HyperbolicPositive}));  // Delta != mu
  CHECK(index_data_problem({"x", 1.0, 1, SpectralClass::HyperbolicPositive}));  // odd positive
  CHECK(index_data_problem({"x", 2.0, 2, SpectralClass::HyperbolicNegative}));  // even negative
  CHECK(index_data_problem({"x", 0.0, 0, SpectralClass::Degenerate}));
}

TEST_CASE("chain ranks") {
  CHECK(chain_ranks(constructed(2)).ranks == std::map<int, long>{{0, 2}});
  CHECK(chain_ranks(constructed(5)).ranks == std::map<int, long>{{0, 8}});
  CHECK(chain_ranks({}).ranks.empty());
  CHECK(chain_ranks({}).total() == 0);

  try {
    chain_ranks({saddle("ok"), {"bad1", 0.0, 2, SpectralClass::HyperbolicPositive}, {"bad2", 0.5, 0, SpectralClass::Elliptic}});
    FAIL("expected InvalidIndexData");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidIndexData);
    const std::string w = e.what();
    CHECK(w.find("bad1") != std::string::npos);
    CHECK(w.find("bad2") != std::string::npos);
    CHECK(w.find("ok:") == std::string::npos);
  }
}

TEST_CASE("homology from lacunary chains") {
  for (int g = 2; g <= 6; ++g) {
    const auto h = hfn_from_lacunary(chain_ranks(constructed(g)));
    CHECK(h.lacunary);
    CHECK(h.rank(0) == 2 * g - 2);
    CHECK(h.rank(1) == 0);
    CHECK(h.rank(-1) == 0);
  }
  const auto mixed = hfn_from_lacunary({{{0, 1}, {1, 1}}});
  CHECK(!mixed.lacunary);
  REQUIRE(mixed.adjacent);
  CHECK(mixed.adjacent->first == 0);

  const auto empty = hfn_from_lacunary({});
  CHECK(empty.lacunary);
  CHECK(empty.rank(0) == 0);

  const auto gapped = hfn_from_lacunary({{{0, 3}, {2, 1}, {5, 2}}});
  CHECK(gapped.lacunary);
  CHECK(gapped.rank(5) == 2);
  CHECK(gapped.rank(2) == 1);
}

TEST_CASE("pipeline ranks for the constructed flow") {
  for (int g = 2; g <= 6; ++g) {
    CAPTURE(g);
    const auto data = index_data(find_fixed_points(build_surface(SurfaceConfig::defaults(g))));
    const auto h = hfn_from_lacunary(chain_ranks(data));
    CHECK(h.lacunary);
    CHECK(h.rank(0) == 2 * g - 2);
    CHECK(h.ranks.size() == 1);
  }
}

TEST_CASE("tau0 worked instances") {
  const FixedPointIndexData half{"x0", 0.5, 1, SpectralClass::Elliptic};
  CHECK(tau0(half, {saddle("y")}) == 7);
  CHECK(tau0(half, {}) == 2);
  const FixedPointIndexData two{"x0", 2.0, 2, SpectralClass::HyperbolicPositive};
  CHECK(tau0(two, {{"a", 1.0, 1, SpectralClass::HyperbolicNegative}, {"b", 5.0, 5, SpectralClass::HyperbolicNegative}}) ==
        4);
  CHECK(code_of([&] { tau0(half, {{"z", 0.5, 1, SpectralClass::Elliptic}}); }) == ErrorCode::SContainsEqualIndex);
  CHECK(code_of([&] { tau0(half, {{"z", 0.5 + 1e-12, 1, SpectralClass::Elliptic}}); }) ==
        ErrorCode::SContainsEqualIndex);
  CHECK(code_of([&] { tau0(half, {{"z", 0.5 + 1e-12, 1, SpectralClass::Elliptic}}, IndexMode::Exact); }) ==
        ErrorCode::PreconditionViolation);
  const double gap = (0.5 + 1e-6) - 0.5;
  const int k = tau0(half, {{"z", 0.5 + 1e-6, 1, SpectralClass::Elliptic}}, IndexMode::Exact);
  CHECK(k * gap > 3.0);
  CHECK(!((k - 1) * gap > 3.0));
}

TEST_CASE("tau0 agrees with a scan on random instances") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> grid(-400, 400);
  std::uniform_int_distribution<int> size(0, 5);
  int checked = 0;
  while (checked < 1000) {
    const double d0 = grid(rng) / 40.0;
    std::vector<double> ds;
    std::vector<FixedPointIndexData> S;
    const int n = size(rng);
    for (int i = 0; i < n; ++i) {
      const double d = grid(rng) / 40.0;
      if (d == d0) continue;
      ds.push_back(d);
      S.push_back({"y" + std::to_string(i), d, 0, SpectralClass::HyperbolicPositive});
    }
    const int expected = brute_tau0(d0, ds);
    CHECK(tau0({"x0", d0, 0, SpectralClass::HyperbolicPositive}, S) == expected);
    ++checked;
  }
}

TEST_CASE("certify prime") {
  const FixedPointIndexData x0{"x0", 0.5, 1, SpectralClass::Elliptic};
  const std::vector<FixedPointIndexData> pts{x0, saddle("y")};
  const auto l = certify_prime(x0, pts, 7);
  REQUIRE(l.entries.size() == 1);
  CHECK(l.entries[0].kind == InequalityEntry::Kind::Separation);
  CHECK(l.entries[0].margin == doctest::Approx(0.5));
  CHECK(l.entries[0].lhs == doctest::Approx(1.5));
  CHECK(l.iterated_delta == doctest::Approx(3.5));
  CHECK(l.mu == 3);
  CHECK(l.mu > l.mu_lo);
  CHECK(l.mu < l.mu_hi);

  CHECK(code_of([&] { certify_prime(x0, pts, 5); }) == ErrorCode::MarginFailure);
  CHECK(code_of([&] { certify_prime(x0, pts, 9); }) == ErrorCode::PreconditionViolation);
  CHECK(code_of([&] { certify_prime(saddle("z"), pts, 11); }) == ErrorCode::PreconditionViolation);
}

TEST_CASE("certify prime records forced equalities") {
  const FixedPointIndexData x0{"x0", 0.5, 1, SpectralClass::Elliptic};
  const FixedPointIndexData twin{"twin", 0.5, 1, SpectralClass::Elliptic};
  const auto l = certify_prime(x0, {x0, twin, saddle("y")}, 11);
  REQUIRE(l.entries.size() == 2);
  CHECK(l.entries[0].kind == InequalityEntry::Kind::ForcedEquality);
  CHECK(l.entries[0].y == "twin");
  CHECK(l.entries[1].margin == doctest::Approx(11 * 0.5 - 3));
  CHECK(l.mu == 5);
}

TEST_CASE("certification is monotone in the prime") {
  const FixedPointIndexData x0{"x0", 0.25, 1, SpectralClass::Elliptic};
  const std::vector<FixedPointIndexData> pts{x0, saddle("a"), {"b", -0.75, -1, SpectralClass::Elliptic}};
  bool seen = false;
  for (int p : primes_up_to(2000)) {
    bool ok = true;
    try {
      certify_prime(x0, pts, p);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MarginFailure);
      ok = false;
    }
    if (seen) CHECK(ok);
    seen = seen || ok;
  }
  CHECK(seen);
}

TEST_CASE("forced index from a mean index") {
  CHECK(forced_cz(0.5, 1e-9) == 1);
  CHECK(forced_cz(-0.5, 1e-9) == -1);
  CHECK(forced_cz(2.5, 1e-9) == 3);
  CHECK(forced_cz(1.5, 1e-9) == 1);
  CHECK(forced_cz(4.0, 1e-9) == 4);
  CHECK(forced_cz(-3.0, 1e-9) == -3);
}

TEST_CASE("sieve") {
  CHECK(primes_up_to(30) == std::vector<int>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(prime_count(10000) == 1229);
  for (int n : {0, 1, 2, 7, 100, 997, 5000}) CHECK(prime_count(n) == slow_pi(n));
  CHECK(is_prime(9973));
  CHECK(!is_prime(1));
  CHECK(!is_prime(9));
}

TEST_CASE("constructed flow satisfies no hypothesis") {
  for (int g = 2; g <= 4; ++g) {
    const auto c = classify_case(constructed(g), g);
    CHECK(c.status == CertificateStatus::NoHypothesisSatisfied);
    CHECK(c.applicable.empty());
    CHECK(c.certified.empty());
    CHECK(!c.x0);
  }
}

TEST_CASE("one extra elliptic point fires every theorem") {
  auto pts = constructed(2);
  pts.push_back({"e", 0.5, 1, SpectralClass::Elliptic});
  const auto c = classify_case(pts, 2, 10000);
  CHECK(c.status == CertificateStatus::Certified);
  CHECK(c.applies(Theorem::Elliptic));
  CHECK(c.applies(Theorem::NonzeroMean));
  CHECK(c.applies(Theorem::Count));
  REQUIRE(c.count_case);
  CHECK(c.count_case->extra == "e");
  CHECK(c.count_case->mu == 1);
  CHECK(c.count_case->reduction == Theorem::Elliptic);
  CHECK(c.x0 == std::optional<std::string>("e"));
  CHECK(c.tau0 == 7);
  CHECK(c.S.size() == 2);
  CHECK(static_cast<long>(c.certified.size()) == prime_count(10000) - prime_count(7));
  CHECK(c.expected_prime_count == 1225);
  CHECK(c.certified.front().tau == 11);
  CHECK(c.certified.back().tau == 9973);
  for (const auto& l : c.certified) {
    CHECK(l.entries.size() == 2);
    CHECK(l.min_margin() > 0.0);
  }
}

TEST_CASE("count case analysis") {
  // mu = 0 overflow with a hyperbolic degree-1 partner
  auto pts = constructed(2);
  pts.push_back(saddle("x"));
  pts.push_back({"y", 1.0, 1, SpectralClass::HyperbolicNegative});
  auto c = classify_case(pts, 2, 100);
  REQUIRE(c.count_case);
  CHECK(c.count_case->mu == 0);
  CHECK(c.count_case->partner == std::optional<std::string>("y"));
  CHECK(c.count_case->reduction == Theorem::NonzeroMean);
  CHECK(c.x0 == std::optional<std::string>("y"));

  // mu = 2
  pts = constructed(3);
  pts.push_back({"z", 2.0, 2, SpectralClass::HyperbolicPositive});
  c = classify_case(pts, 3, 100);
  REQUIRE(c.count_case);
  CHECK(c.count_case->mu == 2);
  CHECK(c.count_case->reduction == Theorem::NonzeroMean);
  CHECK(c.tau0 == 2);
  CHECK(c.certified.front().tau == 3);
}

TEST_CASE("inconsistent inputs") {
  auto pts = constructed(2);
  pts.push_back({"w", 0.0, 2, SpectralClass::HyperbolicPositive});
  CHECK(code_of([&] { classify_case(pts, 2); }) == ErrorCode::InconsistentInput);

  // all mean indices zero with one point too many
  auto flat = constructed(2);
  flat.push_back(saddle("extra"));
  CHECK(code_of([&] { classify_case(flat, 2); }) == ErrorCode::InconsistentInput);
  CHECK(code_of([&] { classify_case(constructed(2), 1); }) == ErrorCode::PreconditionViolation);
}

TEST_CASE("certificate json") {
  auto pts = constructed(2);
  pts.push_back({"e", 0.5, 1, SpectralClass::Elliptic});
  const auto j = to_json(classify_case(pts, 2, 50));
  CHECK(j["status"] == "Certified");
  CHECK(j["tau0"] == 7);
  CHECK(j["applicable_theorems"].size() == 3);
  CHECK(j["certified_primes"].size() == j["expected_prime_count"].get<std::size_t>());
  CHECK(j["certified_primes"][0]["entries"][0]["kind"] == "separation");
  CHECK(j["count_case"]["reduction"] == "elliptic");

  const auto d = index_data_from_json(to_json(pts.back()));
  CHECK(d.id == "e");
  CHECK(d.cz == 1);
  CHECK(d.spectral_class == SpectralClass::Elliptic);
  CHECK(code_of([] { index_data_from_json({{"mean_index", 0.0}, {"cz", 0}, {"class", "Parabolic"}}); }) ==
        ErrorCode::BadConfig);
  CHECK(code_of([] { index_data_from_json({{"cz", 0}}); }) == ErrorCode::BadConfig);

  const auto n = to_json(classify_case(constructed(2), 2));
  CHECK(n["status"] == "NoHypothesisSatisfied");
  CHECK(n["x0"].is_null());
}
